#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "floodsim/consensus.hpp"

namespace {

using floodsim::Detection;

std::vector<Detection> clustered(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 540.0);
  std::uniform_real_distribution<double> jitter(-15.0, 15.0);
  std::uniform_real_distribution<double> conf(0.05, 0.95);
  std::vector<Detection> out;
  out.reserve(n);
  const double cx = pos(rng);
  const double cy = pos(rng) * 0.7;
  for (std::size_t i = 0; i < n; ++i) {
    const bool grouped = i % 3 != 0;
    const double x = grouped ? cx + jitter(rng) : pos(rng);
    const double y = grouped ? cy + jitter(rng) : pos(rng) * 0.7;
    out.push_back({{x, y, x + 90.0, y + 70.0}, conf(rng), 1 + static_cast<int>(i % 3)});
  }
  return out;
}

void BM_Aggregate(benchmark::State& state) {
  const auto dets = clustered(static_cast<std::size_t>(state.range(0)), 42);
  floodsim::AggregationParams p;
  for (auto _ : state) {
    auto boxes = floodsim::aggregate(dets, p);
    benchmark::DoNotOptimize(floodsim::image_score(boxes, p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Aggregate)->RangeMultiplier(2)->Range(4, 256);

void BM_BruteForceAggregate(benchmark::State& state) {
  const auto dets = clustered(static_cast<std::size_t>(state.range(0)), 42);
  floodsim::AggregationParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(floodsim::brute_force_aggregate(dets, p));
  }
}
BENCHMARK(BM_BruteForceAggregate)->DenseRange(4, 12, 4);

}  // namespace
