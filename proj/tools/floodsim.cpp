// floodsim: generate sequences, run scenarios and the ablation matrix,
// replay stored runs and re-render tables.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "floodsim/matrix.hpp"
#include "floodsim/provenance.hpp"
#include "floodsim/scenario.hpp"
#include "floodsim/sequence_gen.hpp"

namespace fs = std::filesystem;
using floodsim::ConfigError;
using floodsim::DomainError;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDivergent = 2;

const fs::path kDefaultData = "storage/data";
const fs::path kDefaultResults = "storage/data_results";

struct Flags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string config;
  std::string sequence;
  std::string variant;
  std::string out;
  long long timeout_ms = 0;
  bool timeout_set = false;
  std::string cost_model;
  std::string path;  // positional for replay / report
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << content;
}

fs::path sequence_path(const std::string& token) {
  fs::path p(token);
  if (token.find('/') != std::string::npos || p.extension() == ".jsonl") return p;
  return kDefaultData / "sequences" / (token + ".jsonl");
}

std::optional<fs::path> baselines_near(const fs::path& seq) {
  const fs::path candidate = seq.parent_path().parent_path() / "baselines.txt";
  if (fs::exists(candidate)) return candidate;
  return std::nullopt;
}

floodsim::AblationConfig ablation(const std::string& token) {
  auto found = floodsim::find_ablation(token);
  if (!found) throw ConfigError("unknown configuration '" + token + "'");
  return *found;
}

floodsim::SensorVariant variant(const std::string& token) {
  auto v = floodsim::parse_variant(token);
  if (!v) throw ConfigError("unknown variant '" + token + "' (real_wet, neutral, anti_flood)");
  return *v;
}

// Flags shared by run and matrix.
void apply_common(const Flags& f, floodsim::RunConfig& c) {
  if (f.seed_set) c.seed = f.seed;
  if (f.timeout_set) c.offload_timeout_ms = f.timeout_ms;
  if (!f.cost_model.empty()) c.cost = floodsim::resolve_cost_model(f.cost_model);
}

nlohmann::ordered_json invocation(const std::string& sub, const Flags& f) {
  nlohmann::ordered_json j;
  j["subcommand"] = sub;
  j["seed"] = f.seed_set ? nlohmann::ordered_json(f.seed) : nlohmann::ordered_json(nullptr);
  j["config"] = f.config;
  j["sequence"] = f.sequence;
  j["variant"] = f.variant;
  j["out"] = f.out;
  j["timeout_ms"] = f.timeout_set ? nlohmann::ordered_json(f.timeout_ms) : nlohmann::ordered_json(nullptr);
  j["cost_model"] = f.cost_model;
  return j;
}

int cmd_gen(const Flags& f) {
  const fs::path out = f.out.empty() ? kDefaultData : fs::path(f.out);
  const std::uint64_t seed = f.seed_set ? f.seed : 7;
  const auto ds = floodsim::write_dataset(out, seed);
  for (const auto& p : ds.sequences) std::cout << "sequence  " << p.generic_string() << "\n";
  std::cout << "baselines " << ds.baselines.generic_string() << "\n";
  for (const auto& p : ds.scenarios) std::cout << "scenario  " << p.generic_string() << "\n";
  return kExitOk;
}

void print_run(const floodsim::RunMetrics& m) {
  std::cout << "run        " << m.run_id << "\n"
            << "emitted    " << m.emitted << "  decided " << m.decided << "  dropped "
            << m.dropped << "  rejected " << m.rejected << "\n"
            << "coverage   " << m.coverage << "\n";
  if (m.classification) {
    std::cout << "macro F1   " << m.classification->macro_f1 << "\n"
              << "bal. acc.  " << m.classification->balanced_accuracy << "\n"
              << "flood P/R  " << m.classification->flood_precision << " / "
              << m.classification->flood_recall << "\n"
              << "watch R    " << m.classification->watch_recall << "\n";
  }
  if (m.p99_latency_ms) std::cout << "p99 ms     " << *m.p99_latency_ms << "\n";
  std::cout << "energy J   " << m.total_energy_j << "\n"
            << "offloads   " << m.offload_jobs << "\n"
            << "oscill.    " << m.oscillations << "\n";
}

int cmd_run(const Flags& f) {
  floodsim::RunInputs inputs;
  const std::string cfg = f.config.empty() ? "production" : f.config;
  if (fs::path(cfg).extension() == ".json") {
    const floodsim::Scenario sc = floodsim::load_scenario(cfg);
    inputs.sequence_path = sc.sequence_path;
    inputs.baselines_path = sc.baselines_path;
    inputs.config = sc.config;
  } else {
    inputs.config.ablation = ablation(cfg);
  }
  if (!f.sequence.empty()) {
    inputs.sequence_path = sequence_path(f.sequence);
    inputs.baselines_path = baselines_near(inputs.sequence_path);
  }
  if (inputs.sequence_path.empty()) throw ConfigError("--sequence is required");
  if (!f.variant.empty()) inputs.config.variant = variant(f.variant);
  apply_common(f, inputs.config);

  const fs::path out = f.out.empty() ? kDefaultResults : fs::path(f.out);
  const auto artifact =
      floodsim::execute_run(inputs, out, invocation("run", f).dump());
  print_run(artifact.metrics);
  std::cout << "artifacts  " << artifact.dir.generic_string() << "\n";
  return kExitOk;
}

int cmd_matrix(const Flags& f) {
  floodsim::MatrixSpec spec;
  const std::string cfgs = f.config.empty() ? "all" : f.config;
  if (cfgs == "all") {
    spec.configs = floodsim::canonical_ablations();
  } else {
    for (const auto& t : split(cfgs, ',')) spec.configs.push_back(ablation(t));
  }

  std::vector<fs::path> seq_paths;
  const std::string seqs = f.sequence.empty() ? "all" : f.sequence;
  if (seqs == "all") {
    for (const auto& id : floodsim::sequence_ids()) seq_paths.push_back(sequence_path(id));
  } else {
    for (const auto& t : split(seqs, ',')) seq_paths.push_back(sequence_path(t));
  }
  for (const auto& p : seq_paths) {
    if (!fs::exists(p)) {
      throw ConfigError("sequence " + p.string() + " not found (run `floodsim gen` first)");
    }
    spec.sequences.push_back(floodsim::load_sequence(p));
  }
  if (auto b = baselines_near(seq_paths.front())) spec.baselines = floodsim::load_baselines(*b);

  const std::string vars = f.variant.empty() ? "neutral" : f.variant;
  spec.variants.clear();
  if (vars == "all") {
    spec.variants.assign(floodsim::kAllVariants.begin(), floodsim::kAllVariants.end());
  } else {
    for (const auto& t : split(vars, ',')) spec.variants.push_back(variant(t));
  }
  apply_common(f, spec.base);
  spec.seed = spec.base.seed;

  const auto result = floodsim::run_matrix(spec);
  const fs::path out = f.out.empty() ? kDefaultResults / "matrix" : fs::path(f.out);
  fs::create_directories(out);
  write_text(out / "matrix.json", floodsim::matrix_to_json(result));
  write_text(out / "matrix.csv", floodsim::matrix_csv(result));
  const std::string table = floodsim::matrix_table(result);
  write_text(out / "matrix.txt", table);
  write_text(out / "invocation.json", invocation("matrix", f).dump(2) + "\n");
  std::cout << table;
  if (spec.variants.size() > 1) std::cout << "\n" << floodsim::variant_table(result);
  return result.failures.empty() ? kExitOk : kExitError;
}

int cmd_replay(const Flags& f) {
  const fs::path dir = f.path.empty() ? fs::path(f.out) : fs::path(f.path);
  if (dir.empty()) throw ConfigError("replay needs a run directory");
  const auto verdict = floodsim::replay(dir);
  std::cout << "verdict " << floodsim::to_string(verdict.status);
  if (!verdict.detail.empty()) std::cout << ": " << verdict.detail;
  std::cout << "\n";
  switch (verdict.status) {
    case floodsim::ReplayStatus::identical: return kExitOk;
    case floodsim::ReplayStatus::divergent: return kExitDivergent;
    case floodsim::ReplayStatus::missing_input: return kExitError;
  }
  return kExitError;
}

int cmd_report(const Flags& f) {
  fs::path p = f.path.empty() ? (f.out.empty() ? kDefaultResults / "matrix" : fs::path(f.out))
                              : fs::path(f.path);
  if (fs::is_directory(p) && fs::exists(p / "matrix.json")) p /= "matrix.json";
  if (fs::is_regular_file(p)) {
    const auto m = floodsim::matrix_from_json(read_text(p));
    std::cout << floodsim::matrix_table(m);
    return kExitOk;
  }
  if (fs::is_directory(p) && fs::exists(p / "metrics.json")) {
    print_run(floodsim::metrics_from_json(read_text(p / "metrics.json")));
    return kExitOk;
  }
  if (fs::is_directory(p)) {
    // A results root: pool every stored run.
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(p)) {
      if (e.is_directory() && fs::exists(e.path() / "metrics.json")) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw ConfigError("no stored runs under " + p.string());
    floodsim::MatrixResult m;
    for (const auto& d : dirs) m.cells.push_back(floodsim::metrics_from_json(read_text(d / "metrics.json")));
    m.aggregates = floodsim::aggregate(m.cells);
    std::cout << floodsim::matrix_table(m);
    return kExitOk;
  }
  throw ConfigError("nothing to report at " + p.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floodsim: flood-detection control plane simulator"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub, bool sim_flags) {
    sub->add_option("--seed", f.seed, "Seed")->envname("FLOODSIM_SEED")->each([&](const std::string&) {
      f.seed_set = true;
    });
    sub->add_option("--out", f.out, "Output directory")->envname("FLOODSIM_OUT");
    if (!sim_flags) return;
    sub->add_option("--config", f.config, "Ablation id or name, list, 'all', or scenario .json")
        ->envname("FLOODSIM_CONFIG");
    sub->add_option("--sequence", f.sequence, "Sequence id or .jsonl path, list or 'all'")
        ->envname("FLOODSIM_SEQUENCE");
    sub->add_option("--variant", f.variant, "real_wet, neutral, anti_flood, list or 'all'")
        ->envname("FLOODSIM_VARIANT");
    sub->add_option("--timeout-ms", f.timeout_ms, "Offload timeout (virtual ms)")
        ->envname("FLOODSIM_TIMEOUT_MS")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { f.timeout_set = true; });
    sub->add_option("--cost-model", f.cost_model, "Preset (reference, pi_jetson) or JSON file")
        ->envname("FLOODSIM_COST_MODEL");
  };

  auto* gen = app.add_subcommand("gen", "Write the synthetic sequences, baselines and scenarios");
  add_common(gen, false);
  auto* run = app.add_subcommand("run", "Run one scenario and store its artifacts");
  add_common(run, true);
  auto* matrix = app.add_subcommand("matrix", "Run the ablation matrix");
  add_common(matrix, true);
  auto* replay = app.add_subcommand("replay", "Re-execute a stored run and compare its log");
  replay->add_option("run_dir", f.path, "Run directory")->required();
  auto* report = app.add_subcommand("report", "Re-render tables from stored metrics");
  report->add_option("path", f.path, "matrix.json, run directory or results root");
  report->add_option("--out", f.out, "Results directory")->envname("FLOODSIM_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*gen) return cmd_gen(f);
    if (*run) return cmd_run(f);
    if (*matrix) return cmd_matrix(f);
    if (*replay) return cmd_replay(f);
    if (*report) return cmd_report(f);
  } catch (const std::exception& e) {
    std::cerr << "floodsim: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
