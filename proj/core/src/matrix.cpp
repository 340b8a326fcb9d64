#include "floodsim/matrix.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "floodsim/simulation.hpp"
#include "json_io.hpp"
#include "mix.hpp"
#include "text_util.hpp"

namespace floodsim {

using jsonio::Json;

std::uint64_t cell_seed(std::uint64_t seed, std::string_view config_id,
                        std::string_view sequence_id, SensorVariant variant) {
  std::uint64_t h = detail::combine(seed, detail::hash_string(config_id));
  h = detail::combine(h, detail::hash_string(sequence_id));
  return detail::combine(h, detail::hash_string(to_string(variant)));
}

RunConfig cell_config(const MatrixSpec& spec, const AblationConfig& config,
                      const Sequence& seq, SensorVariant variant) {
  RunConfig c = spec.base;
  c.ablation = config;
  c.variant = variant;
  c.seed = cell_seed(spec.seed, config.id, seq.id, variant);
  return c;
}

MatrixResult run_matrix(const MatrixSpec& spec) {
  MatrixResult out;
  for (const AblationConfig& config : spec.configs) {
    for (const Sequence& seq : spec.sequences) {
      for (SensorVariant variant : spec.variants) {
        const RunConfig rc = cell_config(spec, config, seq, variant);
        try {
          const RunResult r = run_simulation(seq, rc, spec.baselines);
          out.cells.push_back(compute_metrics(r, seq, rc, spec.metrics));
        } catch (const std::exception& e) {
          out.failures.push_back({config.id, seq.id, variant, e.what()});
        }
      }
    }
  }
  out.aggregates = aggregate(out.cells, spec.metrics);
  out.options = spec.metrics;
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<RunMetrics>& cells,
                                    const MetricsOptions& options) {
  // Configs in first-seen order; sequences completed per (config, variant).
  std::vector<std::pair<std::string, std::string>> configs;
  std::vector<SensorVariant> variants;
  std::map<std::pair<std::string, SensorVariant>, std::set<std::string>> done;
  for (const RunMetrics& m : cells) {
    if (std::find_if(configs.begin(), configs.end(),
                     [&](const auto& c) { return c.first == m.config_id; }) == configs.end()) {
      configs.emplace_back(m.config_id, m.config_name);
    }
    if (std::find(variants.begin(), variants.end(), m.variant) == variants.end()) {
      variants.push_back(m.variant);
    }
    done[{m.config_id, m.variant}].insert(m.sequence_id);
  }

  std::vector<AggregateRow> rows;
  for (SensorVariant variant : variants) {
    std::optional<std::set<std::string>> common;
    for (const auto& [id, name] : configs) {
      const auto& seqs = done[{id, variant}];
      if (!common) {
        common = seqs;
      } else {
        std::set<std::string> both;
        std::set_intersection(common->begin(), common->end(), seqs.begin(), seqs.end(),
                              std::inserter(both, both.begin()));
        common = std::move(both);
      }
    }
    for (const auto& [id, name] : configs) {
      AggregateRow row;
      row.config_id = id;
      row.config_name = name;
      row.variant = variant;
      std::vector<HazardLabel> pred, truth;
      std::vector<Millis> lat;
      for (const RunMetrics& m : cells) {
        if (m.config_id != id || m.variant != variant || !common->count(m.sequence_id)) continue;
        row.sequences.push_back(m.sequence_id);
        row.emitted += m.emitted;
        row.decided += m.decided;
        row.total_energy_j += m.total_energy_j;
        row.oscillations += m.oscillations;
        row.offload_jobs += m.offload_jobs;
        for (std::size_t t = 0; t < 4; ++t) row.tier_histogram[t] += m.tier_histogram[t];
        pred.insert(pred.end(), m.predicted.begin(), m.predicted.end());
        truth.insert(truth.end(), m.truth.begin(), m.truth.end());
        lat.insert(lat.end(), m.latencies_ms.begin(), m.latencies_ms.end());
      }
      row.coverage = row.emitted == 0 ? 0.0 : double(row.decided) / double(row.emitted);
      if (!pred.empty()) {
        row.classification = classification_metrics(pred, truth);
        row.p99_latency_ms = percentile_latency(lat, 99.0, options.iqr_filter);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt_fixed(const std::optional<double>& v, int digits) {
  return v ? fixed(*v, digits) : "n/a";
}

std::optional<double> f1_of(const std::optional<ClassificationMetrics>& c) {
  return c ? std::optional<double>(c->macro_f1) : std::nullopt;
}
std::optional<double> ba_of(const std::optional<ClassificationMetrics>& c) {
  return c ? std::optional<double>(c->balanced_accuracy) : std::nullopt;
}
std::optional<double> p99_of(const std::optional<Millis>& v) {
  return v ? std::optional<double>(static_cast<double>(*v)) : std::nullopt;
}

std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::string out;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::string line;
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      const auto& cell = rows[k][i];
      // First two columns left-aligned, numbers right-aligned.
      if (i < 2) {
        line += cell + std::string(width[i] - cell.size(), ' ');
      } else {
        line += std::string(width[i] - cell.size(), ' ') + cell;
      }
      if (i + 1 < rows[k].size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (k == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i + 1 < width.size() ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

std::string csv_number(double v) { return text::format_double(v); }

std::string csv_opt(const std::optional<double>& v) { return v ? csv_number(*v) : ""; }

}  // namespace

std::string matrix_table(const MatrixResult& m) {
  std::string out;
  std::vector<SensorVariant> variants;
  for (const auto& row : m.aggregates) {
    if (std::find(variants.begin(), variants.end(), row.variant) == variants.end()) {
      variants.push_back(row.variant);
    }
  }
  for (SensorVariant v : variants) {
    std::vector<std::vector<std::string>> rows{{"ID", "Configuration", "Total Energy (J)",
                                                "Macro F1 (2-class)", "Balanced Accuracy",
                                                "p99 Lat. (ms)", "Temporal Coverage"}};
    std::size_t pooled = 0;
    for (const auto& row : m.aggregates) {
      if (row.variant != v) continue;
      pooled = row.sequences.size();
      rows.push_back({row.config_id, row.config_name, fixed(row.total_energy_j, 1),
                      opt_fixed(f1_of(row.classification), 3),
                      opt_fixed(ba_of(row.classification), 3),
                      opt_fixed(p99_of(row.p99_latency_ms), 1), fixed(row.coverage, 3)});
    }
    if (!out.empty()) out += "\n";
    out += "variant " + std::string(to_string(v)) + ", " + std::to_string(pooled) +
           " sequences pooled\n";
    out += render(rows);
  }
  for (const auto& f : m.failures) {
    out += "FAILED cell " + f.config_id + " / " + f.sequence_id + " / " +
           std::string(to_string(f.variant)) + ": " + f.error + "\n";
  }
  return out;
}

std::string variant_table(const MatrixResult& m) {
  std::vector<std::vector<std::string>> rows{{"Config", "Sequence", "Variant", "Flood Recall",
                                              "Watch Recall", "Temporal Coverage",
                                              "Decided", "Emitted"}};
  for (const auto& c : m.cells) {
    rows.push_back({c.config_name, c.sequence_id, std::string(to_string(c.variant)),
                    c.classification ? fixed(c.classification->flood_recall, 3) : "n/a",
                    c.classification ? fixed(c.classification->watch_recall, 3) : "n/a",
                    fixed(c.coverage, 3), std::to_string(c.decided), std::to_string(c.emitted)});
  }
  return render(rows);
}

std::string matrix_csv(const MatrixResult& m) {
  std::ostringstream out;
  out << "scope,config_id,config_name,sequence_id,variant,seed,emitted,decided,dropped,"
         "rejected,coverage,macro_f1,balanced_accuracy,flood_precision,flood_recall,"
         "watch_recall,p99_latency_ms,total_energy_j,oscillations,tier_nano,tier_small,"
         "tier_medium,tier_large,offload_jobs\n";
  for (const auto& c : m.cells) {
    const auto& cl = c.classification;
    out << "cell," << c.config_id << ',' << c.config_name << ',' << c.sequence_id << ','
        << to_string(c.variant) << ',' << c.seed << ',' << c.emitted << ',' << c.decided
        << ',' << c.dropped << ',' << c.rejected << ',' << csv_number(c.coverage) << ','
        << csv_opt(f1_of(cl)) << ',' << csv_opt(ba_of(cl)) << ','
        << (cl ? csv_number(cl->flood_precision) : "") << ','
        << (cl ? csv_number(cl->flood_recall) : "") << ','
        << (cl ? csv_number(cl->watch_recall) : "") << ',' << csv_opt(p99_of(c.p99_latency_ms))
        << ',' << csv_number(c.total_energy_j) << ',' << c.oscillations;
    for (auto n : c.tier_histogram) out << ',' << n;
    out << ',' << c.offload_jobs << '\n';
  }
  for (const auto& a : m.aggregates) {
    const auto& cl = a.classification;
    std::string seqs;
    for (const auto& s : a.sequences) seqs += (seqs.empty() ? "" : "+") + s;
    out << "aggregate," << a.config_id << ',' << a.config_name << ',' << seqs << ','
        << to_string(a.variant) << ",," << a.emitted << ',' << a.decided << ",,,"
        << csv_number(a.coverage) << ',' << csv_opt(f1_of(cl)) << ',' << csv_opt(ba_of(cl))
        << ',' << (cl ? csv_number(cl->flood_precision) : "") << ','
        << (cl ? csv_number(cl->flood_recall) : "") << ','
        << (cl ? csv_number(cl->watch_recall) : "") << ',' << csv_opt(p99_of(a.p99_latency_ms))
        << ',' << csv_number(a.total_energy_j) << ',' << a.oscillations;
    for (auto n : a.tier_histogram) out << ',' << n;
    out << ',' << a.offload_jobs << '\n';
  }
  return out.str();
}

std::string matrix_to_json(const MatrixResult& m) {
  Json j;
  j["oscillation"] =
      m.options.oscillation == OscillationMode::flicker ? "flicker" : "transitions";
  j["iqr_filter"] = m.options.iqr_filter;
  Json cells = Json::array();
  for (const auto& c : m.cells) cells.push_back(Json::parse(metrics_to_json(c)));
  j["cells"] = std::move(cells);
  Json failures = Json::array();
  for (const auto& f : m.failures) {
    failures.push_back(Json{{"config_id", f.config_id},
                            {"sequence_id", f.sequence_id},
                            {"variant", std::string(to_string(f.variant))},
                            {"error", f.error}});
  }
  j["failures"] = std::move(failures);
  return j.dump(1) + "\n";
}

MatrixResult matrix_from_json(std::string_view text) {
  const Json j = jsonio::parse(text, "matrix");
  MatrixResult m;
  try {
    if (j.contains("oscillation") && j.at("oscillation") == "transitions") {
      m.options.oscillation = OscillationMode::transitions;
    }
    if (j.contains("iqr_filter")) m.options.iqr_filter = jsonio::flag(j, "iqr_filter");
    for (const auto& c : j.at("cells")) m.cells.push_back(metrics_from_json(c.dump()));
    for (const auto& f : j.at("failures")) {
      const auto v = parse_variant(jsonio::text(f, "variant"));
      m.failures.push_back({jsonio::text(f, "config_id"), jsonio::text(f, "sequence_id"),
                            v.value_or(SensorVariant::neutral), jsonio::text(f, "error")});
    }
  } catch (const Json::exception& e) {
    throw MetricsError(std::string("matrix: ") + e.what());
  }
  m.aggregates = aggregate(m.cells, m.options);
  return m;
}

}  // namespace floodsim
