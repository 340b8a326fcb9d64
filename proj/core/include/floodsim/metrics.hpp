// Evaluation metrics over decided frames.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "floodsim/domain.hpp"
#include "floodsim/fsm.hpp"
#include "floodsim/scenario.hpp"
#include "floodsim/sequence.hpp"
#include "floodsim/simulation.hpp"

namespace floodsim {

class MetricsError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class BinaryLabel { non_flood, flood };

/// Flooded -> flood; NoFlood and SomeWater -> non_flood.
std::vector<BinaryLabel> binarize(std::span<const HazardLabel> labels);

struct ClassificationMetrics {
  double macro_f1 = 0.0;
  double balanced_accuracy = 0.0;
  double flood_precision = 0.0;
  double flood_recall = 0.0;
  /// Recall of SomeWater over the 3-class labels.
  double watch_recall = 0.0;

  friend bool operator==(const ClassificationMetrics&, const ClassificationMetrics&) = default;
};

/// 3-class predictions and truth, aligned. Conventions: a class absent from
/// the truth has recall 1; a class never predicted has precision 1 when it is
/// also absent from the truth and 0 otherwise; F1 is 0 when P + R = 0.
/// Throws MetricsError on empty or misaligned input.
ClassificationMetrics classification_metrics(std::span<const HazardLabel> predicted,
                                             std::span<const HazardLabel> truth);

enum class OscillationMode { flicker, transitions };

/// flicker: indices i with l[i] != l[i-1] and l[i+1] == l[i-1].
/// transitions: indices i with l[i] != l[i-1].
int oscillation_count(std::span<const HazardLabel> labels,
                      OscillationMode mode = OscillationMode::flicker);

/// Nearest-rank percentile (rank = ceil(p/100 * n), at least 1). With
/// `iqr_filter`, values outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR] are removed
/// first; quartiles are nearest-rank too. Throws MetricsError when empty or
/// p is outside [0, 100].
Millis percentile_latency(std::span<const Millis> latencies, double p,
                          bool iqr_filter = false);

struct MetricsOptions {
  OscillationMode oscillation = OscillationMode::flicker;
  bool iqr_filter = false;
};

struct RunMetrics {
  std::string run_id;
  std::string sequence_id;
  std::string config_id;
  std::string config_name;
  SensorVariant variant = SensorVariant::neutral;
  std::uint64_t seed = 0;
  std::string fingerprint;

  std::size_t emitted = 0;
  std::size_t decided = 0;
  std::size_t dropped = 0;
  std::size_t rejected = 0;
  double coverage = 0.0;
  std::optional<ClassificationMetrics> classification;  // none without decisions
  std::optional<Millis> p99_latency_ms;
  double total_energy_j = 0.0;
  EnergyBreakdown energy;
  int oscillations = 0;
  std::array<std::size_t, 4> tier_histogram{};   // decided frames per tier
  std::array<std::size_t, 5> state_histogram{};  // decided frames per state after
  std::size_t state_changes = 0;
  std::size_t offload_jobs = 0;
  std::size_t fallbacks = 0;

  // Raw series kept so tables can be re-aggregated without re-simulating.
  std::vector<HazardLabel> predicted;
  std::vector<HazardLabel> truth;
  std::vector<Millis> latencies_ms;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

RunMetrics compute_metrics(const RunResult& result, const Sequence& seq,
                           const RunConfig& config, const MetricsOptions& options = {});

std::string run_id(std::string_view sequence_id, const RunConfig& config);

std::string metrics_to_json(const RunMetrics& m);
RunMetrics metrics_from_json(std::string_view json);

}  // namespace floodsim
