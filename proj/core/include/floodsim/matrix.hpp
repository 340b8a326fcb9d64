// Ablation matrix: one simulation per (config, sequence, variant) cell and
// pooled rows over the sequences every compared configuration completed.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "floodsim/ablation.hpp"
#include "floodsim/metrics.hpp"
#include "floodsim/scenario.hpp"
#include "floodsim/sequence.hpp"

namespace floodsim {

struct MatrixSpec {
  std::vector<AblationConfig> configs;
  std::vector<Sequence> sequences;
  std::vector<SensorVariant> variants{SensorVariant::neutral};
  DiurnalBaselines baselines;
  /// Everything except ablation, variant and seed is taken from here.
  RunConfig base;
  std::uint64_t seed = 1;
  MetricsOptions metrics;
};

struct CellFailure {
  std::string config_id;
  std::string sequence_id;
  SensorVariant variant = SensorVariant::neutral;
  std::string error;
};

struct AggregateRow {
  std::string config_id;
  std::string config_name;
  SensorVariant variant = SensorVariant::neutral;
  std::vector<std::string> sequences;  // the pooled subset
  std::size_t emitted = 0;
  std::size_t decided = 0;
  double coverage = 0.0;
  std::optional<ClassificationMetrics> classification;
  std::optional<Millis> p99_latency_ms;
  double total_energy_j = 0.0;
  int oscillations = 0;
  std::array<std::size_t, 4> tier_histogram{};
  std::size_t offload_jobs = 0;
};

struct MatrixResult {
  std::vector<RunMetrics> cells;     // config-major, then sequence, then variant
  std::vector<CellFailure> failures; // reported, never skipped silently
  std::vector<AggregateRow> aggregates;
  MetricsOptions options;
};

/// Seed of one cell; independent of the order cells are run in.
std::uint64_t cell_seed(std::uint64_t seed, std::string_view config_id,
                        std::string_view sequence_id, SensorVariant variant);

RunConfig cell_config(const MatrixSpec& spec, const AblationConfig& config,
                      const Sequence& seq, SensorVariant variant);

MatrixResult run_matrix(const MatrixSpec& spec);

/// Pools cells per (config, variant) over the sequences that every config
/// in `cells` completed for that variant.
std::vector<AggregateRow> aggregate(const std::vector<RunMetrics>& cells,
                                    const MetricsOptions& options = {});

std::string matrix_csv(const MatrixResult& m);
/// Aligned table with the columns ID, Configuration, Total Energy (J),
/// Macro F1 (2-class), Balanced Accuracy, p99 Lat. (ms), Temporal Coverage.
std::string matrix_table(const MatrixResult& m);
/// Sensor-variant table: flood recall, watch recall, coverage per variant.
std::string variant_table(const MatrixResult& m);

std::string matrix_to_json(const MatrixResult& m);
MatrixResult matrix_from_json(std::string_view json);

}  // namespace floodsim
