// Run configuration, scenario files and the configuration fingerprint.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "floodsim/ablation.hpp"
#include "floodsim/consensus.hpp"
#include "floodsim/cost_model.hpp"
#include "floodsim/fsm.hpp"
#include "floodsim/fusion.hpp"

namespace floodsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outage {
  Millis from_ms = 0;
  Millis to_ms = 0;  // exclusive

  friend bool operator==(const Outage&, const Outage&) = default;
};

struct RunConfig {
  AblationConfig ablation = *find_ablation("4");
  SensorVariant variant = SensorVariant::neutral;
  CostModel cost = CostModel::reference();
  AggregationParams aggregation;  // ensemble_size / image_area set per run
  FsmPolicyParams fsm;
  HazardThresholds thresholds;
  BoostRuleTable boost = BoostRuleTable::defaults();
  Millis heartbeat_period_ms = 1000;
  int miss_limit = 3;
  Millis offload_timeout_ms = 2000;
  std::uint64_t seed = 1;
  std::vector<Outage> worker_outages;
  std::size_t max_pending_events = 200'000;

  void validate() const;
};

/// Canonical JSON of the resolved configuration (fixed key order).
std::string to_canonical_json(const RunConfig& config);
RunConfig run_config_from_json(std::string_view json);

/// Content digest of the resolved configuration and its inputs.
std::string config_fingerprint(const RunConfig& config,
                               std::string_view sequence_digest,
                               std::string_view baselines_digest);

/// Boost rules are configured by name from the built-in catalogue.
BoostRuleTable boost_table_from(const std::vector<std::pair<std::string, int>>& rules,
                                int clamp_min_bp, int clamp_max_bp);

/// A scenario file: inputs plus (partial) run configuration.
struct Scenario {
  std::filesystem::path sequence_path;
  std::optional<std::filesystem::path> baselines_path;
  RunConfig config;
};

/// Relative paths inside the file resolve against the file's directory.
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& scenario);

/// Resolves a cost model argument: a preset name or a JSON file of overrides.
CostModel resolve_cost_model(std::string_view preset_or_path);

}  // namespace floodsim
