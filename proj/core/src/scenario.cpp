#include "floodsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "floodsim/sequence.hpp"
#include "json_io.hpp"

namespace floodsim {

using jsonio::Json;

void RunConfig::validate() const {
  try {
    cost.validate();
    aggregation.validate();
    fsm.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (ablation.ensemble_size < 1 || ablation.ensemble_size > kMaxEnsembleSize) {
    throw ConfigError("ensemble_size must be 1.." + std::to_string(kMaxEnsembleSize));
  }
  if (ablation.tiers.empty()) throw ConfigError("ablation allows no tiers");
  if (!(0.0 < thresholds.some_water && thresholds.some_water < thresholds.flooded)) {
    throw ConfigError("hazard thresholds must satisfy 0 < some_water < flooded");
  }
  if (boost.clamp_min_bp > boost.clamp_max_bp) throw ConfigError("boost clamp min > max");
  if (heartbeat_period_ms <= 0) throw ConfigError("heartbeat_period_ms must be > 0");
  if (miss_limit < 1) throw ConfigError("miss_limit must be >= 1");
  if (offload_timeout_ms <= 0) throw ConfigError("offload_timeout_ms must be > 0");
  if (max_pending_events == 0) throw ConfigError("max_pending_events must be > 0");
  for (const Outage& o : worker_outages) {
    if (o.from_ms < 0 || o.to_ms <= o.from_ms) {
      throw ConfigError("worker outage must satisfy 0 <= from < to");
    }
  }
}

namespace {

Json ablation_json(const AblationConfig& a) {
  Json j;
  j["id"] = a.id;
  j["name"] = a.name;
  j["ensemble_size"] = a.ensemble_size;
  Json tiers = Json::array();
  for (Tier t : a.tiers) tiers.push_back(std::string(to_string(t)));
  j["tiers"] = std::move(tiers);
  j["fsm_enabled"] = a.fsm_enabled;
  j["fusion_enabled"] = a.fusion_enabled;
  j["offload"] = std::string(to_string(a.offload));
  j["worker_enabled"] = a.worker_enabled;
  j["static_tier"] = std::string(to_string(a.static_tier));
  return j;
}

Tier tier_value(const Json& j, std::string_view key) {
  const auto t = parse_tier(jsonio::text(j, key));
  if (!t) throw ConfigError("unknown tier in '" + std::string(key) + "'");
  return *t;
}

AblationConfig ablation_from(const Json& j) {
  if (j.is_string()) {
    auto found = find_ablation(j.get<std::string>());
    if (!found) throw ConfigError("unknown ablation '" + j.get<std::string>() + "'");
    return *found;
  }
  if (!j.is_object()) throw ConfigError("ablation must be an id or an object");
  AblationConfig a;
  if (j.contains("id")) {
    if (auto found = find_ablation(jsonio::text(j, "id"))) a = *found;
    a.id = jsonio::text(j, "id");
  }
  if (j.contains("name")) a.name = jsonio::text(j, "name");
  if (j.contains("ensemble_size")) {
    a.ensemble_size = static_cast<int>(jsonio::integer(j, "ensemble_size"));
  }
  if (j.contains("tiers")) {
    a.tiers.clear();
    for (const auto& t : j.at("tiers")) {
      const auto tier = t.is_string() ? parse_tier(t.get<std::string>()) : std::nullopt;
      if (!tier) throw ConfigError("unknown tier in ablation tiers");
      a.tiers.push_back(*tier);
    }
  }
  if (j.contains("fsm_enabled")) a.fsm_enabled = jsonio::flag(j, "fsm_enabled");
  if (j.contains("fusion_enabled")) a.fusion_enabled = jsonio::flag(j, "fusion_enabled");
  if (j.contains("offload")) {
    const auto p = parse_offload_policy(jsonio::text(j, "offload"));
    if (!p) throw ConfigError("unknown offload policy");
    a.offload = *p;
  }
  if (j.contains("worker_enabled")) a.worker_enabled = jsonio::flag(j, "worker_enabled");
  if (j.contains("static_tier")) a.static_tier = tier_value(j, "static_tier");
  return a;
}

Json cost_json(const CostModel& c) {
  Json j;
  j["name"] = c.name;
  Json tiers;
  for (Tier t : kAllTiers) {
    const TierCost& tc = c.at(t);
    tiers[std::string(to_string(t))] = Json{
        {"latency_ms", tc.latency_ms}, {"energy_j", tc.energy_j}, {"jitter_ms", tc.jitter_ms}};
  }
  j["tiers"] = std::move(tiers);
  j["local_latency_scale"] = c.local_latency_scale;
  j["local_energy_scale"] = c.local_energy_scale;
  j["worker_latency_scale"] = c.worker_latency_scale;
  j["worker_energy_scale"] = c.worker_energy_scale;
  j["local_extra_model_factor"] = c.local_extra_model_factor;
  j["worker_extra_model_factor"] = c.worker_extra_model_factor;
  j["message_latency_ms"] = c.message_latency_ms;
  j["transfer_energy_j"] = c.transfer_energy_j;
  j["processing_idle_w"] = c.processing_idle_w;
  j["worker_resident_w"] = c.worker_resident_w;
  return j;
}

template <typename T>
void maybe(const Json& j, std::string_view key, T& out) {
  auto it = j.find(std::string(key));
  if (it == j.end()) return;
  if constexpr (std::is_same_v<T, double>) {
    out = jsonio::number(j, key);
  } else if constexpr (std::is_same_v<T, bool>) {
    out = jsonio::flag(j, key);
  } else if constexpr (std::is_same_v<T, std::string>) {
    out = jsonio::text(j, key);
  } else {
    out = static_cast<T>(jsonio::integer(j, key));
  }
}

CostModel cost_from(const Json& j, CostModel base) {
  if (j.is_string()) {
    auto preset = CostModel::preset(j.get<std::string>());
    if (!preset) throw ConfigError("unknown cost model '" + j.get<std::string>() + "'");
    return *preset;
  }
  if (!j.is_object()) throw ConfigError("cost model must be a preset name or an object");
  if (j.contains("base")) {
    auto preset = CostModel::preset(jsonio::text(j, "base"));
    if (!preset) throw ConfigError("unknown cost model base '" + jsonio::text(j, "base") + "'");
    base = *preset;
  }
  maybe(j, "name", base.name);
  if (j.contains("tiers")) {
    const Json& tiers = j.at("tiers");
    for (Tier t : kAllTiers) {
      auto it = tiers.find(std::string(to_string(t)));
      if (it == tiers.end()) continue;
      TierCost& tc = base.tiers[static_cast<int>(t)];
      maybe(*it, "latency_ms", tc.latency_ms);
      maybe(*it, "energy_j", tc.energy_j);
      maybe(*it, "jitter_ms", tc.jitter_ms);
    }
  }
  maybe(j, "local_latency_scale", base.local_latency_scale);
  maybe(j, "local_energy_scale", base.local_energy_scale);
  maybe(j, "worker_latency_scale", base.worker_latency_scale);
  maybe(j, "worker_energy_scale", base.worker_energy_scale);
  maybe(j, "local_extra_model_factor", base.local_extra_model_factor);
  maybe(j, "worker_extra_model_factor", base.worker_extra_model_factor);
  maybe(j, "message_latency_ms", base.message_latency_ms);
  maybe(j, "transfer_energy_j", base.transfer_energy_j);
  maybe(j, "processing_idle_w", base.processing_idle_w);
  maybe(j, "worker_resident_w", base.worker_resident_w);
  return base;
}

const std::vector<BoostRule>& boost_catalogue() {
  static const std::vector<BoostRule> rules = BoostRuleTable::defaults().rules;
  return rules;
}

RunConfig config_from(const Json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be an object");
  RunConfig c;
  if (j.contains("ablation")) c.ablation = ablation_from(j.at("ablation"));
  if (j.contains("variant")) {
    const auto v = parse_variant(jsonio::text(j, "variant"));
    if (!v) throw ConfigError("unknown variant");
    c.variant = *v;
  }
  if (j.contains("cost_model")) c.cost = cost_from(j.at("cost_model"), c.cost);
  if (j.contains("aggregation")) {
    const Json& a = j.at("aggregation");
    maybe(a, "confidence_floor", c.aggregation.confidence_floor);
    maybe(a, "iou_threshold", c.aggregation.iou_threshold);
    maybe(a, "group_confidence_floor", c.aggregation.group_confidence_floor);
    maybe(a, "agreement_bonus", c.aggregation.agreement_bonus);
    maybe(a, "ensemble_size", c.aggregation.ensemble_size);
    maybe(a, "image_area", c.aggregation.image_area);
  }
  if (j.contains("fsm")) {
    const Json& f = j.at("fsm");
    maybe(f, "low_threshold", c.fsm.low_threshold);
    maybe(f, "high_threshold", c.fsm.high_threshold);
    maybe(f, "promote_streak", c.fsm.promote_streak);
    maybe(f, "demote_streak", c.fsm.demote_streak);
  }
  if (j.contains("thresholds")) {
    const Json& t = j.at("thresholds");
    maybe(t, "some_water", c.thresholds.some_water);
    maybe(t, "flooded", c.thresholds.flooded);
  }
  if (j.contains("boost")) {
    const Json& b = j.at("boost");
    int lo = c.boost.clamp_min_bp, hi = c.boost.clamp_max_bp;
    maybe(b, "clamp_min_bp", lo);
    maybe(b, "clamp_max_bp", hi);
    std::vector<std::pair<std::string, int>> rules;
    if (b.contains("rules")) {
      for (const auto& r : b.at("rules")) {
        rules.emplace_back(jsonio::text(r, "name"),
                           static_cast<int>(jsonio::integer(r, "contribution_bp")));
      }
    } else {
      for (const auto& r : c.boost.rules) rules.emplace_back(r.name, r.contribution_bp);
    }
    c.boost = boost_table_from(rules, lo, hi);
  }
  maybe(j, "heartbeat_period_ms", c.heartbeat_period_ms);
  maybe(j, "miss_limit", c.miss_limit);
  maybe(j, "offload_timeout_ms", c.offload_timeout_ms);
  maybe(j, "seed", c.seed);
  maybe(j, "max_pending_events", c.max_pending_events);
  if (j.contains("worker_outages")) {
    for (const auto& o : j.at("worker_outages")) {
      if (!o.is_array() || o.size() != 2 || !o[0].is_number_integer() ||
          !o[1].is_number_integer()) {
        throw ConfigError("worker_outages entries must be [from_ms, to_ms]");
      }
      c.worker_outages.push_back({o[0].get<Millis>(), o[1].get<Millis>()});
    }
  }
  return c;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["ablation"] = ablation_json(c.ablation);
  j["variant"] = std::string(to_string(c.variant));
  j["cost_model"] = cost_json(c.cost);
  j["aggregation"] = Json{{"confidence_floor", c.aggregation.confidence_floor},
                          {"iou_threshold", c.aggregation.iou_threshold},
                          {"group_confidence_floor", c.aggregation.group_confidence_floor},
                          {"agreement_bonus", c.aggregation.agreement_bonus},
                          {"ensemble_size", c.aggregation.ensemble_size},
                          {"image_area", c.aggregation.image_area}};
  j["fsm"] = Json{{"low_threshold", c.fsm.low_threshold},
                  {"high_threshold", c.fsm.high_threshold},
                  {"promote_streak", c.fsm.promote_streak},
                  {"demote_streak", c.fsm.demote_streak}};
  j["thresholds"] = Json{{"some_water", c.thresholds.some_water},
                         {"flooded", c.thresholds.flooded}};
  Json rules = Json::array();
  for (const auto& r : c.boost.rules) {
    rules.push_back(Json{{"name", r.name}, {"contribution_bp", r.contribution_bp}});
  }
  j["boost"] = Json{{"rules", std::move(rules)},
                    {"clamp_min_bp", c.boost.clamp_min_bp},
                    {"clamp_max_bp", c.boost.clamp_max_bp}};
  j["heartbeat_period_ms"] = c.heartbeat_period_ms;
  j["miss_limit"] = c.miss_limit;
  j["offload_timeout_ms"] = c.offload_timeout_ms;
  j["seed"] = c.seed;
  Json outages = Json::array();
  for (const Outage& o : c.worker_outages) outages.push_back(Json::array({o.from_ms, o.to_ms}));
  j["worker_outages"] = std::move(outages);
  j["max_pending_events"] = c.max_pending_events;
  return j;
}

Json parse_config_text(std::string_view text) {
  try {
    return jsonio::parse(text, "configuration");
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::string to_canonical_json(const RunConfig& config) { return config_json(config).dump(); }

RunConfig run_config_from_json(std::string_view json) {
  try {
    return config_from(parse_config_text(json));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string config_fingerprint(const RunConfig& config, std::string_view sequence_digest,
                               std::string_view baselines_digest) {
  std::string material = to_canonical_json(config);
  material += '\n';
  material += sequence_digest;
  material += '\n';
  material += baselines_digest;
  return sha256_hex(material);
}

BoostRuleTable boost_table_from(const std::vector<std::pair<std::string, int>>& rules,
                                int clamp_min_bp, int clamp_max_bp) {
  BoostRuleTable table;
  table.rules.clear();
  table.clamp_min_bp = clamp_min_bp;
  table.clamp_max_bp = clamp_max_bp;
  for (const auto& [name, bp] : rules) {
    const auto& catalogue = boost_catalogue();
    auto it = std::find_if(catalogue.begin(), catalogue.end(),
                           [&](const BoostRule& r) { return r.name == name; });
    if (it == catalogue.end()) throw ConfigError("unknown boost rule '" + name + "'");
    BoostRule rule = *it;
    rule.contribution_bp = bp;
    table.rules.push_back(std::move(rule));
  }
  return table;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  const Json j = parse_config_text(read_file(path));
  try {
    Scenario s;
    const auto dir = path.parent_path();
    s.sequence_path = dir / jsonio::text(j, "sequence");
    if (j.contains("baselines")) s.baselines_path = dir / jsonio::text(j, "baselines");
    if (j.contains("config")) s.config = config_from(j.at("config"));
    return s;
  } catch (const DomainError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_scenario(const std::filesystem::path& path, const Scenario& scenario) {
  const auto dir = path.parent_path();
  Json j;
  j["sequence"] = scenario.sequence_path.lexically_relative(dir).generic_string();
  if (scenario.baselines_path) {
    j["baselines"] = scenario.baselines_path->lexically_relative(dir).generic_string();
  }
  j["config"] = config_json(scenario.config);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

CostModel resolve_cost_model(std::string_view preset_or_path) {
  if (auto preset = CostModel::preset(preset_or_path)) return *preset;
  const std::filesystem::path path{std::string(preset_or_path)};
  if (!std::filesystem::exists(path)) {
    throw ConfigError("cost model '" + std::string(preset_or_path) +
                      "' is neither a preset (reference, pi_jetson) nor a file");
  }
  try {
    CostModel m = cost_from(parse_config_text(read_file(path)), CostModel::reference());
    m.validate();
    return m;
  } catch (const DomainError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace floodsim
