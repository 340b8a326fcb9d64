#include <string>
#include <vector>

#include "doctest.h"
#include "floodsim/bus.hpp"
#include "floodsim/health.hpp"
#include "floodsim/sequence_gen.hpp"
#include "floodsim/simulation.hpp"

using namespace floodsim;

TEST_SUITE("simnet") {

TEST_CASE("events fire by due time, ties in scheduling order") {
  EventQueue q;
  std::vector<int> order;
  q.schedule(20, [&] { order.push_back(3); });
  q.schedule(10, [&] { order.push_back(1); });
  q.schedule(10, [&] { order.push_back(2); });
  CHECK(q.run() == 3);
  CHECK(order == std::vector<int>{1, 2, 3});
  CHECK(q.now() == 20);
}

TEST_CASE("past events are clamped to now") {
  EventQueue q;
  Millis seen = -1;
  q.schedule(50, [&] { q.schedule(10, [&] { seen = q.now(); }); });
  q.run();
  CHECK(seen == 50);
}

TEST_CASE("pending bound is enforced") {
  EventQueue q(2);
  q.schedule(1, [] {});
  q.schedule(2, [] {});
  CHECK_THROWS_AS(q.schedule(3, [] {}), SimulationError);
}

TEST_CASE("topic filters") {
  CHECK(topics::matches("inference/response/+", "inference/response/j-1"));
  CHECK_FALSE(topics::matches("inference/response/+", "inference/response"));
  CHECK(topics::matches("inference/#", "inference/jetson/status"));
  CHECK_FALSE(topics::matches("sensor/data", "sensor/data/x"));
  CHECK(topics::is_known("inference/response/abc"));
  CHECK_FALSE(topics::is_known("inference/response/"));
  CHECK_FALSE(topics::is_known("camera/raw"));
}

TEST_CASE("bus delivers after the message latency") {
  EventQueue q;
  Bus bus(q, 20);
  Millis delivered = -1;
  bus.subscribe("sensor/data", [&](const std::string&, const Payload&) { delivered = q.now(); });
  FrameMessage f;
  f.frame_id = 1;
  CHECK(bus.publish("sensor/data", f) == 1);
  q.run();
  CHECK(delivered == 20);
  CHECK_THROWS_AS(bus.publish("nowhere", f), SimulationError);
}

TEST_CASE("retained heartbeat reaches late subscribers") {
  EventQueue q;
  Bus bus(q, 20);
  bus.publish(std::string(topics::kJetsonStatus), Heartbeat{5, "jetson"});
  q.run();
  REQUIRE(bus.retained(std::string(topics::kJetsonStatus)).has_value());
  int got = 0;
  bus.subscribe(std::string(topics::kJetsonStatus), [&](const std::string&, const Payload& p) {
    got += std::holds_alternative<Heartbeat>(p) ? 1 : 0;
  });
  q.run();
  CHECK(got == 1);
  CHECK_FALSE(bus.retained("sensor/data").has_value());
}

TEST_CASE("unsubscribed handlers get nothing") {
  EventQueue q;
  Bus bus(q, 20);
  int got = 0;
  const int id = bus.subscribe("sensor/data", [&](const std::string&, const Payload&) { ++got; });
  bus.publish("sensor/data", FrameMessage{});
  bus.unsubscribe(id);
  q.run();
  CHECK(got == 0);
}

TEST_CASE("breaker opens on stale heartbeats and on timeouts") {
  WorkerHealth h;
  h = health_update(h, HealthEvent::tick, 3000);
  CHECK(h.breaker == Breaker::closed);
  h = health_update(h, HealthEvent::tick, 3001);
  CHECK(h.breaker == Breaker::open);
  h = health_update(h, HealthEvent::heartbeat, 3002);
  CHECK(h.breaker == Breaker::closed);

  for (int i = 0; i < 2; ++i) h = health_update(h, HealthEvent::timeout, 3100);
  CHECK(h.breaker == Breaker::closed);
  h = health_update(h, HealthEvent::timeout, 3200);
  CHECK(h.breaker == Breaker::open);
  h = health_update(h, HealthEvent::heartbeat, 3300);
  CHECK(h.breaker == Breaker::closed);
  CHECK(h.consecutive_timeouts == 0);
}

TEST_CASE("a response clears the timeout streak") {
  WorkerHealth h;
  h = health_update(h, HealthEvent::timeout, 10);
  h = health_update(h, HealthEvent::timeout, 20);
  h = health_update(h, HealthEvent::response, 30);
  CHECK(h.consecutive_timeouts == 0);
}

TEST_CASE("every emitted frame is accounted for") {
  const DiurnalBaselines climate = climate_baselines();
  for (const Sequence& seq : generate_sequences(3)) {
    for (const char* cfg : {"1b", "4", "6"}) {
      RunConfig c;
      c.ablation = *find_ablation(cfg);
      const RunResult r = run_simulation(seq, c, climate);
      CHECK(r.emitted == seq.frames.size());
      CHECK(r.decided + r.dropped + r.rejected == r.emitted);
      CHECK(r.records.size() == r.emitted);
      CHECK(r.max_buffered <= 1);
    }
  }
}

TEST_CASE("identical inputs give identical runs") {
  const Sequence seq = generate_sequence("fast_passing", 2);
  RunConfig c;
  const RunResult a = run_simulation(seq, c, climate_baselines());
  const RunResult b = run_simulation(seq, c, climate_baselines());
  CHECK(a.records == b.records);
  CHECK(a.trace == b.trace);
  CHECK(a.fingerprint == b.fingerprint);
}

TEST_CASE("implausible sensor frame is rejected, not dropped") {
  const Sequence seq = generate_sequence("fast_passing", 7);
  const RunResult r = run_simulation(seq, RunConfig{}, climate_baselines());
  CHECK(r.rejected >= 1);
  bool seen = false;
  for (const DecisionRecord& rec : r.records) {
    if (rec.status == FrameStatus::rejected) {
      seen = true;
      CHECK_FALSE(rec.label.has_value());
    }
  }
  CHECK(seen);
}

TEST_CASE("local-only configs never publish jobs") {
  const Sequence seq = generate_sequence("stopped_water", 7);
  RunConfig c;
  c.ablation = *find_ablation("3");
  const RunResult r = run_simulation(seq, c, climate_baselines());
  CHECK(r.offload_jobs == 0);
  CHECK(r.energy.worker_inference_j == 0.0);
  for (const DecisionRecord& rec : r.records) {
    if (rec.status == FrameStatus::decided) CHECK(rec.tier == Tier::nano);
  }
}

TEST_CASE("worker outage opens the breaker and stops publications") {
  const Sequence seq = generate_sequence("stopped_water", 7);
  RunConfig c;
  c.worker_outages = {{10'000, 20'000}};
  const RunResult r = run_simulation(seq, c, climate_baselines());
  CHECK_FALSE(r.offloaded_while_open);
  REQUIRE_FALSE(r.breaker_changes.empty());
  CHECK(r.breaker_changes.front().breaker == Breaker::open);
  CHECK(r.breaker_changes.back().breaker == Breaker::closed);
  CHECK(r.decided + r.dropped + r.rejected == r.emitted);
}

TEST_CASE("invalid configuration is refused") {
  RunConfig c;
  c.miss_limit = 0;
  CHECK_THROWS_AS(run_simulation(generate_sequence("slow_no_water", 1), c, climate_baselines()),
                  ConfigError);
}

TEST_CASE("variant offsets are added on emission") {
  const Sequence seq = generate_sequence("slow_creeping", 1);
  const auto neutral = emitted_frames(seq, SensorVariant::neutral);
  const auto wet = emitted_frames(seq, SensorVariant::real_wet);
  REQUIRE(neutral.size() == wet.size());
  CHECK(wet[0].sensor.humidity_pct == doctest::Approx(neutral[0].sensor.humidity_pct + 18.0));
  CHECK(wet[0].sensor.pressure_hpa == doctest::Approx(neutral[0].sensor.pressure_hpa - 8.0));
}

}
