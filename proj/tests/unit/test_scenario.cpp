#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "floodsim/scenario.hpp"
#include "floodsim/sequence_gen.hpp"

using namespace floodsim;
namespace fs = std::filesystem;

TEST_SUITE("scenario") {

TEST_CASE("ablation catalogue") {
  const auto& all = canonical_ablations();
  REQUIRE(all.size() == 10);
  CHECK(all.front().id == "1");
  CHECK(all.back().name == "always_offload_medium");
  CHECK(find_ablation("4b")->name == "production_single");
  CHECK(find_ablation("production")->ensemble_size == 3);
  CHECK_FALSE(find_ablation("7").has_value());
}

TEST_CASE("tier clamping picks the largest allowed tier not above") {
  const AblationConfig c = *find_ablation("6");
  CHECK(c.clamp(Tier::large) == Tier::medium);
  CHECK(c.clamp(Tier::nano) == Tier::medium);
  CHECK(find_ablation("4")->clamp(Tier::small) == Tier::small);
}

TEST_CASE("canonical json round trips") {
  RunConfig c;
  c.ablation = *find_ablation("5");
  c.variant = SensorVariant::anti_flood;
  c.cost = CostModel::pi_jetson();
  c.seed = 42;
  c.worker_outages = {{1000, 5000}};
  c.fsm.demote_streak = 7;
  const std::string j = to_canonical_json(c);
  CHECK(to_canonical_json(run_config_from_json(j)) == j);
}

TEST_CASE("partial json keeps defaults") {
  const RunConfig c = run_config_from_json(R"({"ablation":"3b","seed":9})");
  CHECK(c.ablation.id == "3b");
  CHECK(c.seed == 9);
  CHECK(c.offload_timeout_ms == 2000);
  CHECK(c.cost == CostModel::reference());
}

TEST_CASE("cost model overrides on a preset base") {
  const RunConfig c = run_config_from_json(
      R"({"cost_model":{"base":"pi_jetson","tiers":{"nano":{"energy_j":0.5}}}})");
  CHECK(c.cost.local_latency_scale == 7.0);
  CHECK(c.cost.at(Tier::nano).energy_j == 0.5);
  CHECK(c.cost.at(Tier::small).energy_j == 0.9);
}

TEST_CASE("bad json is a config error") {
  CHECK_THROWS_AS(run_config_from_json("{"), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(R"({"ablation":"99"})"), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(R"({"variant":"soggy"})"), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(R"({"cost_model":"mainframe"})"), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(R"({"worker_outages":[[5]]})"), ConfigError);
}

TEST_CASE("validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.worker_outages = {{500, 100}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.thresholds.some_water = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.cost.tiers[2].energy_j = 0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("fingerprint depends on config and inputs") {
  RunConfig a;
  RunConfig b;
  b.seed = 2;
  CHECK(config_fingerprint(a, "s", "b") == config_fingerprint(a, "s", "b"));
  CHECK(config_fingerprint(a, "s", "b") != config_fingerprint(b, "s", "b"));
  CHECK(config_fingerprint(a, "s", "b") != config_fingerprint(a, "t", "b"));
  CHECK(config_fingerprint(a, "s", "b").size() == 64);
}

TEST_CASE("cost model figures") {
  const CostModel m = CostModel::reference();
  CHECK(m.inference_energy(Tier::medium, Device::processing, 1) == 2.0);
  CHECK(m.inference_energy(Tier::medium, Device::processing, 3) == doctest::Approx(6.0));
  CHECK(m.inference_energy(Tier::medium, Device::worker, 3) == doctest::Approx(3.0));
  for (int frame = 0; frame < 50; ++frame) {
    const Millis l = m.inference_latency(Tier::large, Device::worker, 1, 1, frame);
    CHECK(l >= 1200);
    CHECK(l <= 1260);
  }
  CHECK(m.inference_latency(Tier::nano, Device::processing, 1, 3, 4) ==
        m.inference_latency(Tier::nano, Device::processing, 1, 3, 4));
  CHECK(CostModel::preset("pi_jetson").has_value());
  CHECK_FALSE(CostModel::preset("gpu_farm").has_value());
}

TEST_CASE("scenario files resolve relative paths") {
  const fs::path dir = fs::temp_directory_path() / "floodsim_scenario_test";
  fs::remove_all(dir);
  const Dataset ds = write_dataset(dir, 5);
  REQUIRE(ds.scenarios.size() == 5);
  const Scenario sc = load_scenario(ds.scenarios.front());
  CHECK(fs::equivalent(sc.sequence_path, ds.sequences.front()));
  REQUIRE(sc.baselines_path.has_value());
  CHECK(fs::equivalent(*sc.baselines_path, ds.baselines));
  CHECK(sc.config.ablation.name == "production");
  CHECK_THROWS_AS(load_scenario(dir / "missing.json"), ConfigError);
  fs::remove_all(dir);
}

}
