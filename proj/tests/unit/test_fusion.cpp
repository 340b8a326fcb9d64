#include <cmath>
#include <sstream>

#include "doctest.h"
#include "floodsim/ablation.hpp"
#include "floodsim/fusion.hpp"

using namespace floodsim;

namespace {

Millis at(int h, int m = 0) { return h * kMillisPerHour + m * 60'000; }

DiurnalBaselines seeded(double t, double rh, double p) {
  DiurnalBaselines b;
  for (DiurnalPeriod period : kAllPeriods) {
    b.at(period) = PeriodBaseline{t, rh, p, 10, 0};
  }
  return b;
}

}  // namespace

TEST_SUITE("fusion") {

TEST_CASE("period windows") {
  CHECK(period_of(at(3)) == DiurnalPeriod::pre_dawn);
  CHECK(period_of(at(6, 59)) == DiurnalPeriod::pre_dawn);
  CHECK(period_of(at(12)) == DiurnalPeriod::midday);
  CHECK(period_of(at(17)) == DiurnalPeriod::evening);
  CHECK(period_of(at(23)) == DiurnalPeriod::night);
  CHECK(period_of(at(2, 59)) == DiurnalPeriod::night);
}

TEST_CASE("gaps attach to the nearer window") {
  CHECK(period_of(at(7, 30)) == DiurnalPeriod::pre_dawn);
  CHECK(period_of(at(9, 30)) == DiurnalPeriod::midday);
  CHECK(period_of(at(8, 30)) == DiurnalPeriod::pre_dawn);  // midpoint
  CHECK(period_of(at(15)) == DiurnalPeriod::midday);
  CHECK(period_of(at(16)) == DiurnalPeriod::evening);
  CHECK(period_of(at(21, 30)) == DiurnalPeriod::evening);  // midpoint
}

TEST_CASE("clock wraps around the day") {
  CHECK(period_of(at(12) + kMillisPerDay) == DiurnalPeriod::midday);
  CHECK(period_of(-at(1)) == DiurnalPeriod::night);
}

TEST_CASE("first no-flood sample seeds the period") {
  DiurnalBaselines b;
  const SensorReading r{18.0, 70.0, 1010.0, 5000};
  b = update_baseline(b, r, HazardLabel::no_flood, DiurnalPeriod::evening);
  CHECK(b.at(DiurnalPeriod::evening).temperature_c == 18.0);
  CHECK(b.at(DiurnalPeriod::evening).sample_count == 1);
  CHECK(b.at(DiurnalPeriod::midday).sample_count == 0);
}

TEST_CASE("wet labels never move the baseline") {
  const DiurnalBaselines b = seeded(20, 50, 1013);
  const SensorReading r{10.0, 90.0, 1000.0, kMillisPerHour};
  CHECK(update_baseline(b, r, HazardLabel::flooded, DiurnalPeriod::midday) == b);
  CHECK(update_baseline(b, r, HazardLabel::some_water, DiurnalPeriod::midday) == b);
}

TEST_CASE("ewma weight follows the elapsed time") {
  const DiurnalBaselines b = seeded(20, 50, 1013);
  const SensorReading r{32.0, 50.0, 1013.0, 12 * kMillisPerHour};
  const auto out = update_baseline(b, r, HazardLabel::no_flood, DiurnalPeriod::midday);
  const double alpha = 1.0 - std::exp(-1.0);
  CHECK(out.at(DiurnalPeriod::midday).temperature_c == doctest::Approx(20 + alpha * 12));
  CHECK(out.at(DiurnalPeriod::midday).last_update_ms == 12 * kMillisPerHour);
}

TEST_CASE("anomalies are zero for an unseeded period") {
  const DiurnalBaselines b;
  CHECK(anomalies(b, {5, 5, 900, 0}, DiurnalPeriod::night) == Anomalies{});
}

TEST_CASE("boost of the three sensor regimes is exact") {
  const BoostRuleTable rules = BoostRuleTable::defaults();
  CHECK(sensor_boost(injection(SensorVariant::real_wet), rules) == 0.14);
  CHECK(sensor_boost(injection(SensorVariant::anti_flood), rules) == -0.08);
  CHECK(sensor_boost(injection(SensorVariant::neutral), rules) == 0.0);
}

TEST_CASE("boost rules are strict inequalities") {
  const BoostRuleTable rules = BoostRuleTable::defaults();
  CHECK(sensor_boost({-2.5, 0.0, 0.0}, rules) == 0.0);
  CHECK(sensor_boost({-2.6, 0.0, 0.0}, rules) == 0.04);
  CHECK(sensor_boost({0.0, 0.0, -5.0}, rules) == 0.0);
  CHECK(sensor_boost({-1.6, 15.1, 0.0}, rules) == 0.08);
}

TEST_CASE("boost is clamped") {
  BoostRuleTable rules = BoostRuleTable::defaults();
  rules.clamp_max_bp = 1000;
  CHECK(sensor_boost(injection(SensorVariant::real_wet), rules) == 0.10);
}

TEST_CASE("baselines store round trip") {
  DiurnalBaselines b = seeded(21.25, 48.5, 1012.75);
  b.at(DiurnalPeriod::night).sample_count = 0;
  std::stringstream ss;
  write_baselines(ss, b);
  CHECK(read_baselines(ss) == b);
}

TEST_CASE("baselines store rejects garbage") {
  std::stringstream ss("midday.temperature_c = warm\n");
  CHECK_THROWS(read_baselines(ss));
}

}
