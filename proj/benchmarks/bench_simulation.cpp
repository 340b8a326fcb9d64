#include <benchmark/benchmark.h>

#include "floodsim/fsm.hpp"
#include "floodsim/matrix.hpp"
#include "floodsim/sequence_gen.hpp"
#include "floodsim/simulation.hpp"

namespace {

void BM_FsmStep(benchmark::State& state) {
  floodsim::FsmState s;
  const floodsim::FsmPolicyParams p;
  double score = 0.0;
  for (auto _ : state) {
    score = score > 0.9 ? 0.0 : score + 0.07;
    const auto out = floodsim::step(s, {score, floodsim::MotionCue::slow,
                                        floodsim::ResourceFlag::normal, false}, p);
    s = out.next;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_FsmStep);

void BM_RunSequence(benchmark::State& state) {
  const auto& ids = floodsim::sequence_ids();
  const auto seq = floodsim::generate_sequence(ids[static_cast<std::size_t>(state.range(0))], 7);
  const auto baselines = floodsim::climate_baselines();
  floodsim::RunConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(floodsim::run_simulation(seq, config, baselines));
  }
  state.SetLabel(seq.id);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(seq.frames.size()));
}
BENCHMARK(BM_RunSequence)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

void BM_NeutralMatrix(benchmark::State& state) {
  floodsim::MatrixSpec spec;
  spec.configs = floodsim::canonical_ablations();
  spec.sequences = floodsim::generate_sequences(7);
  spec.baselines = floodsim::climate_baselines();
  for (auto _ : state) {
    benchmark::DoNotOptimize(floodsim::run_matrix(spec));
  }
}
BENCHMARK(BM_NeutralMatrix)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
