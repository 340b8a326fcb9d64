#include "floodsim/ablation.hpp"

#include <algorithm>

namespace floodsim {

std::string_view to_string(OffloadPolicy p) {
  switch (p) {
    case OffloadPolicy::none: return "none";
    case OffloadPolicy::adaptive: return "adaptive";
    case OffloadPolicy::force_medium_on_fast: return "force_medium_on_fast";
    case OffloadPolicy::always_medium: return "always_medium";
  }
  return "none";
}

std::optional<OffloadPolicy> parse_offload_policy(std::string_view s) {
  for (auto p : {OffloadPolicy::none, OffloadPolicy::adaptive,
                 OffloadPolicy::force_medium_on_fast,
                 OffloadPolicy::always_medium}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

bool AblationConfig::allows(Tier t) const {
  return std::find(tiers.begin(), tiers.end(), t) != tiers.end();
}

Tier AblationConfig::clamp(Tier t) const {
  if (tiers.empty()) return t;
  std::optional<Tier> best;
  for (Tier allowed : tiers) {
    if (allowed <= t && (!best || allowed > *best)) best = allowed;
  }
  if (best) return *best;
  return *std::min_element(tiers.begin(), tiers.end());
}

namespace {

std::vector<AblationConfig> build_canonical() {
  using T = Tier;
  using P = OffloadPolicy;
  const std::vector<Tier> all{T::nano, T::small, T::medium, T::large};
  // id, name, N, tiers, fsm, fusion, policy, worker, static tier, purpose
  return {
      {"1", "static_small", 1, {T::small}, false, false, P::none, false, T::small,
       "Static single-model upper bound"},
      {"1b", "static_nano", 1, {T::nano}, false, false, P::none, false, T::nano,
       "Realistic static local baseline"},
      {"2", "vision_fsm_multi", 3, all, true, false, P::adaptive, true, T::nano,
       "Vision-only FSM with consensus"},
      {"2b", "vision_fsm_single", 1, all, true, false, P::adaptive, true, T::nano,
       "Consensus ablation in vision FSM"},
      {"3", "full_local_multi", 3, {T::nano}, true, true, P::none, false, T::nano,
       "Full system without Jetson"},
      {"3b", "full_local_single", 1, {T::nano}, true, true, P::none, false, T::nano,
       "Consensus ablation local-only"},
      {"4", "production", 3, all, true, true, P::adaptive, true, T::nano,
       "Production system"},
      {"4b", "production_single", 1, all, true, true, P::adaptive, true, T::nano,
       "Consensus ablation in production"},
      {"5", "fast_force_jetson", 3, all, true, true, P::force_medium_on_fast, true,
       T::nano, "Fast-motion safety variant"},
      {"6", "always_offload_medium", 1, {T::medium}, false, false, P::always_medium,
       true, T::medium, "Naive always-offload baseline"},
  };
}

}  // namespace

const std::vector<AblationConfig>& canonical_ablations() {
  static const std::vector<AblationConfig> configs = build_canonical();
  return configs;
}

std::optional<AblationConfig> find_ablation(std::string_view id_or_name) {
  for (const AblationConfig& c : canonical_ablations()) {
    if (c.id == id_or_name || c.name == id_or_name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(SensorVariant v) {
  switch (v) {
    case SensorVariant::neutral: return "neutral";
    case SensorVariant::real_wet: return "real_wet";
    case SensorVariant::anti_flood: return "anti_flood";
  }
  return "neutral";
}

std::optional<SensorVariant> parse_variant(std::string_view s) {
  for (SensorVariant v : kAllVariants) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

Anomalies injection(SensorVariant v) {
  switch (v) {
    case SensorVariant::neutral: return {0.0, 0.0, 0.0};
    case SensorVariant::real_wet: return {-3.5, 18.0, -8.0};
    case SensorVariant::anti_flood: return {10.0, -33.0, 2.0};
  }
  return {};
}

}  // namespace floodsim
