#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "floodsim/provenance.hpp"
#include "floodsim/sequence_gen.hpp"

using namespace floodsim;
namespace fs = std::filesystem;

namespace {

DecisionRecord sample_record() {
  DecisionRecord r;
  r.frame_id = 12;
  r.sequence_id = "stopped_water";
  r.ingest_ms = 11020;
  r.decide_ms = 12400;
  r.motion = MotionCue::stopped;
  r.fsm_before = FsmStateId::normal_watch;
  r.fsm_after = FsmStateId::confirmed_flood;
  r.tier = Tier::large;
  r.offload = true;
  r.job_id = "stopped_water-12-4";
  r.model_detection_counts = {1, 2, 1};
  r.consensus_boxes = {ConsensusBox{{64.5, 200.0, 576.0, 480.0}, 1.9, 3}};
  r.image_score = 0.1;
  r.anomalies = {-3.5, 18.0, -8.0};
  r.sensor_boost = 0.14;
  r.combined_score = 0.1 + 0.14;
  r.label = HazardLabel::some_water;
  r.config_fingerprint = std::string(64, 'a');
  r.energy_j = 5.7;
  r.latency_ms = 1380;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("provenance") {

TEST_CASE("record line round trips") {
  const DecisionRecord r = sample_record();
  const std::string line = write_record(r);
  CHECK(line.back() == '\n');
  CHECK(line.rfind("{\"frame_id\":12,", 0) == 0);
  CHECK(parse_record(line) == r);
  CHECK(write_record(parse_record(line)) == line);
}

TEST_CASE("job_id is the only optional key") {
  DecisionRecord r = sample_record();
  r.job_id.reset();
  r.offload = false;
  const std::string line = write_record(r);
  CHECK(line.find("job_id") == std::string::npos);
  CHECK(parse_record(line) == r);
}

TEST_CASE("non-decided frames carry a null label") {
  DecisionRecord r = sample_record();
  r.status = FrameStatus::dropped;
  r.reason = "superseded by frame 13";
  r.label.reset();
  const std::string line = write_record(r);
  CHECK(line.find("\"label\":null") != std::string::npos);
  CHECK(parse_record(line) == r);
}

TEST_CASE("combined score must equal image score plus boost") {
  DecisionRecord r = sample_record();
  r.combined_score = 0.5;
  CHECK_THROWS_AS(write_record(r), ProvenanceError);
}

TEST_CASE("malformed lines are refused") {
  CHECK_THROWS(parse_record("not json"));
  CHECK_THROWS(parse_record(R"({"frame_id":1})"));
}

TEST_CASE("log comparison names the first divergent line") {
  const std::string a = write_record(sample_record());
  DecisionRecord other = sample_record();
  other.frame_id = 13;
  const std::string b = write_record(other);
  CHECK(compare_logs(a + b, a + b).status == ReplayStatus::identical);
  const ReplayVerdict v = compare_logs(a + a, a + b);
  CHECK(v.status == ReplayStatus::divergent);
  CHECK(v.line == 2u);
  CHECK(v.frame_id == 13);
  CHECK(compare_logs(a, a + b).detail.find("ends early") != std::string::npos);
}

TEST_CASE("stored runs replay identically and tampering is caught") {
  TempDir tmp("floodsim_provenance_test");
  const Dataset ds = write_dataset(tmp.path / "data", 7);
  RunInputs inputs;
  inputs.sequence_path = ds.sequences[1];
  inputs.baselines_path = ds.baselines;
  const RunArtifact art = execute_run(inputs, tmp.path / "results");

  for (const char* f : {"config.json", "decisions.jsonl", "metrics.json", "invocation.json"}) {
    CHECK(fs::exists(art.dir / f));
  }
  CHECK(art.dir.filename() == run_id("fast_passing", inputs.config));
  CHECK(replay(art.dir).status == ReplayStatus::identical);

  // Re-running into a fresh root gives byte-identical logs.
  const RunArtifact again = execute_run(inputs, tmp.path / "results2");
  CHECK(slurp(again.dir / "decisions.jsonl") == slurp(art.dir / "decisions.jsonl"));
  CHECK(slurp(again.dir / "metrics.json") == slurp(art.dir / "metrics.json"));

  const fs::path log = art.dir / "decisions.jsonl";
  std::string text = slurp(log);
  const auto pos = text.find("\"tier\":\"nano\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 13, "\"tier\":\"huge\"");
  std::ofstream(log, std::ios::binary | std::ios::trunc) << text;
  const ReplayVerdict v = replay(art.dir);
  CHECK(v.status == ReplayStatus::divergent);
  CHECK(v.line.has_value());
  CHECK(v.frame_id.has_value());
}

TEST_CASE("missing inputs are reported, not guessed") {
  TempDir tmp("floodsim_provenance_missing");
  const Dataset ds = write_dataset(tmp.path / "data", 7);
  RunInputs inputs;
  inputs.sequence_path = ds.sequences[0];
  inputs.baselines_path = ds.baselines;
  const RunArtifact art = execute_run(inputs, tmp.path / "results");
  fs::remove(ds.sequences[0]);
  CHECK(replay(art.dir).status == ReplayStatus::missing_input);

  RunInputs absent;
  absent.sequence_path = tmp.path / "nope.jsonl";
  CHECK_THROWS_AS(load_inputs(absent), MissingInputError);
}

}
