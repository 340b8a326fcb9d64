#include "floodsim/provenance.hpp"

#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace floodsim {

using jsonio::Json;

std::string_view to_string(FrameStatus s) {
  switch (s) {
    case FrameStatus::decided: return "decided";
    case FrameStatus::dropped: return "dropped";
    case FrameStatus::rejected: return "rejected";
  }
  return "decided";
}

std::optional<FrameStatus> parse_frame_status(std::string_view s) {
  for (auto v : {FrameStatus::decided, FrameStatus::dropped, FrameStatus::rejected}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string write_record(const DecisionRecord& r) {
  if (r.combined_score != r.image_score + r.sensor_boost) {
    throw ProvenanceError("frame " + std::to_string(r.frame_id) +
                          ": combined_score differs from image_score + sensor_boost");
  }
  Json j;
  j["frame_id"] = r.frame_id;
  j["sequence_id"] = r.sequence_id;
  j["status"] = std::string(to_string(r.status));
  j["reason"] = r.reason;
  j["ingest_ms"] = r.ingest_ms;
  j["decide_ms"] = r.decide_ms;
  j["motion"] = std::string(to_string(r.motion));
  j["fsm_before"] = std::string(short_name(r.fsm_before));
  j["fsm_after"] = std::string(short_name(r.fsm_after));
  j["tier"] = std::string(to_string(r.tier));
  j["offload"] = r.offload;
  if (r.job_id) j["job_id"] = *r.job_id;
  j["fallback"] = r.fallback;
  j["model_detection_counts"] = r.model_detection_counts;
  Json boxes = Json::array();
  for (const auto& b : r.consensus_boxes) boxes.push_back(jsonio::consensus_to_json(b));
  j["consensus_boxes"] = std::move(boxes);
  j["image_score"] = r.image_score;
  j["anomalies"] = Json{{"delta_t", r.anomalies.delta_t},
                        {"delta_rh", r.anomalies.delta_rh},
                        {"delta_p", r.anomalies.delta_p}};
  j["sensor_boost"] = r.sensor_boost;
  j["combined_score"] = r.combined_score;
  j["label"] = r.label ? Json(static_cast<int>(*r.label)) : Json(nullptr);
  j["config_fingerprint"] = r.config_fingerprint;
  j["energy_j"] = r.energy_j;
  j["latency_ms"] = r.latency_ms;
  return j.dump() + "\n";
}

DecisionRecord parse_record(std::string_view line) {
  const Json j = jsonio::parse(line, "decision record");
  try {
    DecisionRecord r;
    r.frame_id = jsonio::integer(j, "frame_id");
    r.sequence_id = jsonio::text(j, "sequence_id");
    const auto status = parse_frame_status(jsonio::text(j, "status"));
    if (!status) throw ProvenanceError("unknown status");
    r.status = *status;
    r.reason = jsonio::text(j, "reason");
    r.ingest_ms = jsonio::integer(j, "ingest_ms");
    r.decide_ms = jsonio::integer(j, "decide_ms");
    const auto motion = parse_motion(jsonio::text(j, "motion"));
    const auto before = parse_fsm_state(jsonio::text(j, "fsm_before"));
    const auto after = parse_fsm_state(jsonio::text(j, "fsm_after"));
    const auto tier = parse_tier(jsonio::text(j, "tier"));
    if (!motion || !before || !after || !tier) throw ProvenanceError("unknown enum value");
    r.motion = *motion;
    r.fsm_before = *before;
    r.fsm_after = *after;
    r.tier = *tier;
    r.offload = jsonio::flag(j, "offload");
    if (j.contains("job_id")) r.job_id = jsonio::text(j, "job_id");
    r.fallback = jsonio::flag(j, "fallback");
    r.model_detection_counts = j.at("model_detection_counts").get<std::vector<int>>();
    for (const auto& b : j.at("consensus_boxes")) {
      r.consensus_boxes.push_back(jsonio::consensus_from_json(b));
    }
    r.image_score = jsonio::number(j, "image_score");
    const Json& a = jsonio::field(j, "anomalies");
    r.anomalies = {jsonio::number(a, "delta_t"), jsonio::number(a, "delta_rh"),
                   jsonio::number(a, "delta_p")};
    r.sensor_boost = jsonio::number(j, "sensor_boost");
    r.combined_score = jsonio::number(j, "combined_score");
    if (const Json& l = jsonio::field(j, "label"); !l.is_null()) {
      const auto v = l.get<int>();
      if (v < 0 || v > 2) throw ProvenanceError("label out of range");
      r.label = static_cast<HazardLabel>(v);
    }
    r.config_fingerprint = jsonio::text(j, "config_fingerprint");
    r.energy_j = jsonio::number(j, "energy_j");
    r.latency_ms = jsonio::integer(j, "latency_ms");
    return r;
  } catch (const Json::exception& e) {
    throw ProvenanceError(std::string("decision record: ") + e.what());
  }
}

std::string write_records(const std::vector<DecisionRecord>& records) {
  std::string out;
  for (const auto& r : records) out += write_record(r);
  return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("missing input: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ProvenanceError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string stored_path(const std::filesystem::path& p, const std::filesystem::path& dir) {
  const auto abs = std::filesystem::absolute(p).lexically_normal();
  const auto rel = abs.lexically_relative(std::filesystem::absolute(dir).lexically_normal());
  return (rel.empty() ? abs : rel).generic_string();
}

}  // namespace

LoadedInputs load_inputs(const RunInputs& inputs) {
  if (!std::filesystem::exists(inputs.sequence_path)) {
    throw MissingInputError("missing input: " + inputs.sequence_path.string());
  }
  LoadedInputs loaded;
  loaded.sequence = load_sequence(inputs.sequence_path);
  if (inputs.baselines_path) {
    if (!std::filesystem::exists(*inputs.baselines_path)) {
      throw MissingInputError("missing input: " + inputs.baselines_path->string());
    }
    loaded.baselines = load_baselines(*inputs.baselines_path);
  }
  return loaded;
}

void write_artifact(const std::filesystem::path& dir, const RunInputs& inputs,
                    const LoadedInputs& loaded, const RunResult& result,
                    const RunMetrics& metrics, std::string_view invocation_json) {
  std::filesystem::create_directories(dir);
  Json cfg;
  cfg["run_id"] = metrics.run_id;
  cfg["sequence"] = stored_path(inputs.sequence_path, dir);
  cfg["sequence_digest"] = sequence_digest(loaded.sequence);
  if (inputs.baselines_path) cfg["baselines"] = stored_path(*inputs.baselines_path, dir);
  cfg["baselines_digest"] = baselines_digest(loaded.baselines);
  cfg["fingerprint"] = result.fingerprint;
  cfg["config"] =
      Json::parse(to_canonical_json(resolve_for(loaded.sequence, inputs.config)));
  write_file(dir / "config.json", cfg.dump(2) + "\n");
  write_file(dir / "decisions.jsonl", write_records(result.records));
  write_file(dir / "metrics.json", metrics_to_json(metrics));
  Json inv = jsonio::parse(invocation_json, "invocation");
  write_file(dir / "invocation.json", inv.dump(2) + "\n");
}

RunArtifact execute_run(const RunInputs& inputs, const std::filesystem::path& results_root,
                        std::string_view invocation_json, const MetricsOptions& options) {
  const LoadedInputs loaded = load_inputs(inputs);
  RunArtifact artifact;
  artifact.result = run_simulation(loaded.sequence, inputs.config, loaded.baselines);
  artifact.metrics = compute_metrics(artifact.result, loaded.sequence, inputs.config, options);
  artifact.dir = results_root / artifact.metrics.run_id;
  write_artifact(artifact.dir, inputs, loaded, artifact.result, artifact.metrics,
                 invocation_json);
  return artifact;
}

RunInputs read_run_inputs(const std::filesystem::path& run_dir) {
  const Json cfg = jsonio::parse(read_file(run_dir / "config.json"), "config.json");
  try {
    RunInputs inputs;
    inputs.sequence_path = run_dir / jsonio::text(cfg, "sequence");
    if (cfg.contains("baselines")) inputs.baselines_path = run_dir / jsonio::text(cfg, "baselines");
    inputs.config = run_config_from_json(cfg.at("config").dump());
    return inputs;
  } catch (const Json::exception& e) {
    throw ProvenanceError(std::string("config.json: ") + e.what());
  }
}

std::string_view to_string(ReplayStatus s) {
  switch (s) {
    case ReplayStatus::identical: return "identical";
    case ReplayStatus::divergent: return "divergent";
    case ReplayStatus::missing_input: return "missing_input";
  }
  return "identical";
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl == std::string_view::npos ? text.size() : nl + 1));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::optional<std::int64_t> frame_of(std::string_view line) {
  try {
    const Json j = Json::parse(line);
    if (j.is_object() && j.contains("frame_id") && j["frame_id"].is_number_integer()) {
      return j["frame_id"].get<std::int64_t>();
    }
  } catch (const Json::exception&) {
  }
  return std::nullopt;
}

}  // namespace

ReplayVerdict compare_logs(std::string_view stored, std::string_view regenerated) {
  ReplayVerdict v;
  if (stored == regenerated) return v;
  v.status = ReplayStatus::divergent;
  const auto a = split_lines(stored);
  const auto b = split_lines(regenerated);
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  v.line = i + 1;
  // A tampered stored line may not parse; the regenerated one always does.
  if (i < b.size()) v.frame_id = frame_of(b[i]);
  if (!v.frame_id && i < a.size()) v.frame_id = frame_of(a[i]);
  if (i >= a.size()) {
    v.detail = "stored log ends early at line " + std::to_string(i + 1);
  } else if (i >= b.size()) {
    v.detail = "stored log has extra lines from line " + std::to_string(i + 1);
  } else {
    v.detail = "first divergent line " + std::to_string(i + 1);
  }
  if (v.frame_id) v.detail += " (frame_id " + std::to_string(*v.frame_id) + ")";
  return v;
}

ReplayVerdict replay(const std::filesystem::path& run_dir) {
  try {
    const std::string stored = read_file(run_dir / "decisions.jsonl");
    const RunInputs inputs = read_run_inputs(run_dir);
    const LoadedInputs loaded = load_inputs(inputs);
    const RunResult result = run_simulation(loaded.sequence, inputs.config, loaded.baselines);
    return compare_logs(stored, write_records(result.records));
  } catch (const MissingInputError& e) {
    ReplayVerdict v;
    v.status = ReplayStatus::missing_input;
    v.detail = e.what();
    return v;
  }
}

}  // namespace floodsim
