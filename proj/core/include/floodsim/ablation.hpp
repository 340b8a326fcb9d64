// The ten ablation configurations and the synthetic sensor regimes.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floodsim/domain.hpp"
#include "floodsim/fusion.hpp"

namespace floodsim {

enum class OffloadPolicy { none, adaptive, force_medium_on_fast, always_medium };

std::string_view to_string(OffloadPolicy p);
std::optional<OffloadPolicy> parse_offload_policy(std::string_view s);

struct AblationConfig {
  std::string id;    // "1", "1b", ..., "6"
  std::string name;  // e.g. "production"
  int ensemble_size = 3;
  std::vector<Tier> tiers;  // allowed tiers, ascending
  bool fsm_enabled = true;
  bool fusion_enabled = true;
  OffloadPolicy offload = OffloadPolicy::adaptive;
  bool worker_enabled = true;
  /// Tier used on every frame when the FSM is disabled.
  Tier static_tier = Tier::nano;
  std::string purpose;

  bool allows(Tier t) const;
  /// Largest allowed tier not above `t`, else the smallest allowed tier.
  Tier clamp(Tier t) const;

  friend bool operator==(const AblationConfig&, const AblationConfig&) = default;
};

/// Rows 1, 1b, 2, 2b, 3, 3b, 4, 4b, 5, 6 in table order.
const std::vector<AblationConfig>& canonical_ablations();
/// Looks up by id ("4b") or name ("production_single").
std::optional<AblationConfig> find_ablation(std::string_view id_or_name);

enum class SensorVariant { neutral, real_wet, anti_flood };

inline constexpr std::array<SensorVariant, 3> kAllVariants{
    SensorVariant::neutral, SensorVariant::real_wet, SensorVariant::anti_flood};

std::string_view to_string(SensorVariant v);
std::optional<SensorVariant> parse_variant(std::string_view s);

/// Fixed anomaly offsets: real_wet (-3.5 C, +18 %, -8 hPa), neutral zeros,
/// anti_flood (+10 C, -33 %, +2 hPa).
Anomalies injection(SensorVariant v);

}  // namespace floodsim
