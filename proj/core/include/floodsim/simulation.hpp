// Top-level simulation loop: wires the three nodes onto one virtual clock and
// drains the event queue.
#pragma once

#include <string>
#include <vector>

#include "floodsim/bus.hpp"
#include "floodsim/decision_record.hpp"
#include "floodsim/fusion.hpp"
#include "floodsim/nodes.hpp"
#include "floodsim/scenario.hpp"
#include "floodsim/sequence.hpp"

namespace floodsim {

struct EnergyBreakdown {
  double processing_idle_j = 0.0;
  double processing_inference_j = 0.0;
  double worker_resident_j = 0.0;
  double worker_inference_j = 0.0;
  double transfer_j = 0.0;

  double total() const {
    return processing_idle_j + processing_inference_j + worker_resident_j +
           worker_inference_j + transfer_j;
  }

  friend bool operator==(const EnergyBreakdown&, const EnergyBreakdown&) = default;
};

struct RunResult {
  std::string sequence_id;
  std::string fingerprint;
  std::vector<DecisionRecord> records;  // in emission order of the outcome
  std::size_t emitted = 0;
  std::size_t decided = 0;
  std::size_t dropped = 0;
  std::size_t rejected = 0;
  std::size_t offload_jobs = 0;
  std::size_t worker_completed = 0;
  Millis end_ms = 0;
  EnergyBreakdown energy;
  std::vector<TraceEntry> trace;
  std::vector<BreakerChange> breaker_changes;
  bool offloaded_while_open = false;
  std::size_t max_buffered = 0;
  DiurnalBaselines final_baselines;
};

/// Frames as published by the gathering node: the variant's fixed offsets
/// are added to every reading.
std::vector<FrameMessage> emitted_frames(const Sequence& seq, SensorVariant variant);

/// Runs one scenario to completion. The fingerprint covers the resolved
/// configuration plus digests of the sequence and the initial baselines.
/// Throws ConfigError for an invalid configuration and SimulationError when
/// the event bound is exceeded or frames are unaccounted for.
RunResult run_simulation(const Sequence& seq, const RunConfig& config,
                         const DiurnalBaselines& baselines);

/// Resolves the per-run parts of a configuration (ensemble size and image
/// area of the aggregation parameters).
RunConfig resolve_for(const Sequence& seq, RunConfig config);

std::string baselines_digest(const DiurnalBaselines& b);

}  // namespace floodsim
