#include "floodsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json_io.hpp"

namespace floodsim {

using jsonio::Json;

std::vector<BinaryLabel> binarize(std::span<const HazardLabel> labels) {
  std::vector<BinaryLabel> out;
  out.reserve(labels.size());
  for (HazardLabel l : labels) {
    out.push_back(l == HazardLabel::flooded ? BinaryLabel::flood : BinaryLabel::non_flood);
  }
  return out;
}

namespace {

struct ClassCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
  std::size_t truth_total = 0;

  double recall() const { return truth_total == 0 ? 1.0 : double(tp) / double(tp + fn); }
  double precision() const {
    if (tp + fp == 0) return truth_total == 0 ? 1.0 : 0.0;
    return double(tp) / double(tp + fp);
  }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
};

template <typename L>
ClassCounts counts_for(std::span<const L> pred, std::span<const L> truth, L cls) {
  ClassCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool t = truth[i] == cls, p = pred[i] == cls;
    c.truth_total += t;
    c.tp += t && p;
    c.fp += !t && p;
    c.fn += t && !p;
  }
  return c;
}

}  // namespace

ClassificationMetrics classification_metrics(std::span<const HazardLabel> predicted,
                                             std::span<const HazardLabel> truth) {
  if (predicted.empty()) throw MetricsError("classification metrics undefined for no frames");
  if (predicted.size() != truth.size()) {
    throw MetricsError("predicted and truth lengths differ");
  }
  const auto bp = binarize(predicted);
  const auto bt = binarize(truth);
  const std::span<const BinaryLabel> p(bp), t(bt);
  const ClassCounts flood = counts_for(p, t, BinaryLabel::flood);
  const ClassCounts dry = counts_for(p, t, BinaryLabel::non_flood);
  const ClassCounts watch = counts_for(predicted, truth, HazardLabel::some_water);

  ClassificationMetrics m;
  m.macro_f1 = (flood.f1() + dry.f1()) / 2.0;
  m.balanced_accuracy = (flood.recall() + dry.recall()) / 2.0;
  m.flood_precision = flood.precision();
  m.flood_recall = flood.recall();
  m.watch_recall = watch.recall();
  return m;
}

int oscillation_count(std::span<const HazardLabel> labels, OscillationMode mode) {
  int n = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] == labels[i - 1]) continue;
    if (mode == OscillationMode::transitions) {
      ++n;
    } else if (i + 1 < labels.size() && labels[i + 1] == labels[i - 1]) {
      ++n;
    }
  }
  return n;
}

namespace {

Millis nearest_rank(const std::vector<Millis>& sorted, double p) {
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

}  // namespace

Millis percentile_latency(std::span<const Millis> latencies, double p, bool iqr_filter) {
  if (latencies.empty()) throw MetricsError("percentile of an empty latency list");
  if (!(p >= 0.0 && p <= 100.0)) throw MetricsError("percentile must lie in [0, 100]");
  std::vector<Millis> sorted(latencies.begin(), latencies.end());
  std::sort(sorted.begin(), sorted.end());
  if (iqr_filter && sorted.size() >= 4) {
    const double q1 = static_cast<double>(nearest_rank(sorted, 25.0));
    const double q3 = static_cast<double>(nearest_rank(sorted, 75.0));
    const double iqr = q3 - q1;
    const double lo = q1 - 1.5 * iqr, hi = q3 + 1.5 * iqr;
    std::erase_if(sorted, [&](Millis v) {
      return static_cast<double>(v) < lo || static_cast<double>(v) > hi;
    });
  }
  return nearest_rank(sorted, p);
}

std::string run_id(std::string_view sequence_id, const RunConfig& config) {
  return std::string(sequence_id) + "__" + config.ablation.name + "__" +
         std::string(to_string(config.variant)) + "__s" + std::to_string(config.seed);
}

RunMetrics compute_metrics(const RunResult& result, const Sequence& seq,
                           const RunConfig& config, const MetricsOptions& options) {
  RunMetrics m;
  m.run_id = run_id(seq.id, config);
  m.sequence_id = seq.id;
  m.config_id = config.ablation.id;
  m.config_name = config.ablation.name;
  m.variant = config.variant;
  m.seed = config.seed;
  m.fingerprint = result.fingerprint;
  m.emitted = result.emitted;
  m.decided = result.decided;
  m.dropped = result.dropped;
  m.rejected = result.rejected;
  m.coverage = m.emitted == 0 ? 0.0 : double(m.decided) / double(m.emitted);
  m.energy = result.energy;
  m.total_energy_j = result.energy.total();
  m.offload_jobs = result.offload_jobs;

  std::map<std::int64_t, HazardLabel> truth_by_id;
  for (const auto& sf : seq.frames) truth_by_id[sf.frame.frame_id] = sf.truth;

  // Records arrive in decision order, which is frame order for decided frames.
  std::optional<FsmStateId> last_state;
  for (const DecisionRecord& r : result.records) {
    if (r.status != FrameStatus::decided || !r.label) continue;
    auto it = truth_by_id.find(r.frame_id);
    if (it == truth_by_id.end()) {
      throw MetricsError("no truth for frame " + std::to_string(r.frame_id));
    }
    m.predicted.push_back(*r.label);
    m.truth.push_back(it->second);
    m.latencies_ms.push_back(r.latency_ms);
    ++m.tier_histogram[static_cast<int>(r.tier)];
    ++m.state_histogram[static_cast<int>(r.fsm_after)];
    if (last_state && *last_state != r.fsm_after) ++m.state_changes;
    last_state = r.fsm_after;
    m.fallbacks += r.fallback;
  }
  if (!m.predicted.empty()) {
    m.classification = classification_metrics(m.predicted, m.truth);
    m.p99_latency_ms = percentile_latency(m.latencies_ms, 99.0, options.iqr_filter);
  }
  m.oscillations = oscillation_count(m.predicted, options.oscillation);
  return m;
}

namespace {

Json labels_json(const std::vector<HazardLabel>& v) {
  Json a = Json::array();
  for (HazardLabel l : v) a.push_back(static_cast<int>(l));
  return a;
}

std::vector<HazardLabel> labels_from(const Json& j) {
  std::vector<HazardLabel> out;
  for (const auto& v : j) {
    const int l = v.get<int>();
    if (l < 0 || l > 2) throw MetricsError("label out of range");
    out.push_back(static_cast<HazardLabel>(l));
  }
  return out;
}

}  // namespace

std::string metrics_to_json(const RunMetrics& m) {
  Json j;
  j["run_id"] = m.run_id;
  j["sequence_id"] = m.sequence_id;
  j["config_id"] = m.config_id;
  j["config_name"] = m.config_name;
  j["variant"] = std::string(to_string(m.variant));
  j["seed"] = m.seed;
  j["fingerprint"] = m.fingerprint;
  j["emitted"] = m.emitted;
  j["decided"] = m.decided;
  j["dropped"] = m.dropped;
  j["rejected"] = m.rejected;
  j["coverage"] = m.coverage;
  if (m.classification) {
    const auto& c = *m.classification;
    j["classification"] = Json{{"macro_f1", c.macro_f1},
                               {"balanced_accuracy", c.balanced_accuracy},
                               {"flood_precision", c.flood_precision},
                               {"flood_recall", c.flood_recall},
                               {"watch_recall", c.watch_recall}};
  } else {
    j["classification"] = nullptr;
  }
  j["p99_latency_ms"] = m.p99_latency_ms ? Json(*m.p99_latency_ms) : Json(nullptr);
  j["total_energy_j"] = m.total_energy_j;
  j["energy"] = Json{{"processing_idle_j", m.energy.processing_idle_j},
                     {"processing_inference_j", m.energy.processing_inference_j},
                     {"worker_resident_j", m.energy.worker_resident_j},
                     {"worker_inference_j", m.energy.worker_inference_j},
                     {"transfer_j", m.energy.transfer_j}};
  j["oscillations"] = m.oscillations;
  Json tiers;
  for (Tier t : kAllTiers) tiers[std::string(to_string(t))] = m.tier_histogram[int(t)];
  j["tier_histogram"] = std::move(tiers);
  Json states;
  for (FsmStateId s : kAllFsmStates) states[std::string(short_name(s))] = m.state_histogram[int(s)];
  j["state_histogram"] = std::move(states);
  j["state_changes"] = m.state_changes;
  j["offload_jobs"] = m.offload_jobs;
  j["fallbacks"] = m.fallbacks;
  j["predicted"] = labels_json(m.predicted);
  j["truth"] = labels_json(m.truth);
  j["latencies_ms"] = m.latencies_ms;
  return j.dump(2) + "\n";
}

RunMetrics metrics_from_json(std::string_view text) {
  const Json j = jsonio::parse(text, "metrics");
  try {
    RunMetrics m;
    m.run_id = jsonio::text(j, "run_id");
    m.sequence_id = jsonio::text(j, "sequence_id");
    m.config_id = jsonio::text(j, "config_id");
    m.config_name = jsonio::text(j, "config_name");
    const auto v = parse_variant(jsonio::text(j, "variant"));
    if (!v) throw MetricsError("unknown variant");
    m.variant = *v;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.fingerprint = jsonio::text(j, "fingerprint");
    m.emitted = j.at("emitted").get<std::size_t>();
    m.decided = j.at("decided").get<std::size_t>();
    m.dropped = j.at("dropped").get<std::size_t>();
    m.rejected = j.at("rejected").get<std::size_t>();
    m.coverage = jsonio::number(j, "coverage");
    if (const Json& c = j.at("classification"); !c.is_null()) {
      m.classification = ClassificationMetrics{
          jsonio::number(c, "macro_f1"), jsonio::number(c, "balanced_accuracy"),
          jsonio::number(c, "flood_precision"), jsonio::number(c, "flood_recall"),
          jsonio::number(c, "watch_recall")};
    }
    if (const Json& p = j.at("p99_latency_ms"); !p.is_null()) m.p99_latency_ms = p.get<Millis>();
    m.total_energy_j = jsonio::number(j, "total_energy_j");
    const Json& e = j.at("energy");
    m.energy = {jsonio::number(e, "processing_idle_j"),
                jsonio::number(e, "processing_inference_j"),
                jsonio::number(e, "worker_resident_j"), jsonio::number(e, "worker_inference_j"),
                jsonio::number(e, "transfer_j")};
    m.oscillations = static_cast<int>(jsonio::integer(j, "oscillations"));
    for (Tier t : kAllTiers) {
      m.tier_histogram[int(t)] = j.at("tier_histogram").at(std::string(to_string(t))).get<std::size_t>();
    }
    for (FsmStateId s : kAllFsmStates) {
      m.state_histogram[int(s)] =
          j.at("state_histogram").at(std::string(short_name(s))).get<std::size_t>();
    }
    m.state_changes = j.at("state_changes").get<std::size_t>();
    m.offload_jobs = j.at("offload_jobs").get<std::size_t>();
    m.fallbacks = j.at("fallbacks").get<std::size_t>();
    m.predicted = labels_from(j.at("predicted"));
    m.truth = labels_from(j.at("truth"));
    m.latencies_ms = j.at("latencies_ms").get<std::vector<Millis>>();
    return m;
  } catch (const Json::exception& e) {
    throw MetricsError(std::string("metrics: ") + e.what());
  }
}

}  // namespace floodsim
