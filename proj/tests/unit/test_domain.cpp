#include <limits>

#include "doctest.h"
#include "floodsim/domain.hpp"
#include "support/frames.hpp"

using namespace floodsim;
using floodsim::testing::det;
using floodsim::testing::sample_frame;

TEST_SUITE("domain") {

TEST_CASE("iou of identical, disjoint and half-overlapping boxes") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(iou(a, a) == doctest::Approx(1.0));
  CHECK(iou(a, {20, 20, 30, 30}) == 0.0);
  CHECK(iou(a, {10, 0, 20, 10}) == 0.0);  // touching edges
  CHECK(iou(a, {5, 0, 15, 10}) == doctest::Approx(50.0 / 150.0));
}

TEST_CASE("box validity") {
  CHECK(BoundingBox{0, 0, 1, 1}.valid());
  CHECK_FALSE(BoundingBox{1, 0, 1, 1}.valid());
  CHECK_FALSE(BoundingBox{0, 2, 1, 1}.valid());
}

TEST_CASE("hazard thresholds are half-open") {
  CHECK(classify_hazard(0.149) == HazardLabel::no_flood);
  CHECK(classify_hazard(0.15) == HazardLabel::some_water);
  CHECK(classify_hazard(0.399) == HazardLabel::some_water);
  CHECK(classify_hazard(0.40) == HazardLabel::flooded);
  CHECK(classify_hazard(-1.0) == HazardLabel::no_flood);
}

TEST_CASE("tier steps saturate") {
  CHECK(larger(Tier::large) == Tier::large);
  CHECK(larger(Tier::nano) == Tier::small);
  CHECK(smaller(Tier::nano) == Tier::nano);
  CHECK(smaller(Tier::medium) == Tier::small);
}

TEST_CASE("name round trips") {
  for (Tier t : kAllTiers) CHECK(parse_tier(to_string(t)) == t);
  for (MotionCue m : {MotionCue::stopped, MotionCue::slow, MotionCue::fast}) {
    CHECK(parse_motion(to_string(m)) == m);
  }
  CHECK_FALSE(parse_tier("huge").has_value());
}

TEST_CASE("valid frame passes unchanged") {
  const FrameMessage f = sample_frame();
  const ValidationResult r = validate_frame(f);
  REQUIRE(std::holds_alternative<FrameMessage>(r));
  CHECK(std::get<FrameMessage>(r) == f);
}

TEST_CASE("sensor plausibility") {
  FrameMessage f = sample_frame();
  SUBCASE("humidity above 100") {
    f.sensor.humidity_pct = 104.0;
    auto r = validate_frame(f);
    REQUIRE(std::holds_alternative<Rejection>(r));
    CHECK(std::get<Rejection>(r).field == "relative_humidity");
  }
  SUBCASE("humidity bounds are inclusive") {
    f.sensor.humidity_pct = 100.0;
    CHECK(std::holds_alternative<FrameMessage>(validate_frame(f)));
    f.sensor.humidity_pct = 0.0;
    CHECK(std::holds_alternative<FrameMessage>(validate_frame(f)));
  }
  SUBCASE("pressure bounds are exclusive") {
    f.sensor.pressure_hpa = 800.0;
    CHECK(std::get<Rejection>(validate_frame(f)).field == "pressure");
    f.sensor.pressure_hpa = 1100.0;
    CHECK(std::get<Rejection>(validate_frame(f)).field == "pressure");
  }
  SUBCASE("non-finite temperature") {
    f.sensor.temperature_c = std::numeric_limits<double>::quiet_NaN();
    CHECK(std::get<Rejection>(validate_frame(f)).field == "temperature");
  }
}

TEST_CASE("frame id must increase") {
  FrameCheck check;
  check.last_frame_id = 5;
  CHECK(std::get<Rejection>(validate_frame(sample_frame(5), check)).field == "frame_id");
  CHECK(std::holds_alternative<FrameMessage>(validate_frame(sample_frame(6), check)));
}

TEST_CASE("detection payload checks") {
  FrameMessage f = sample_frame();
  SUBCASE("missing required tier") {
    f.detections_by_tier.erase(Tier::large);
    CHECK(std::get<Rejection>(validate_frame(f)).field == "detections_by_tier");
    FrameCheck relaxed;
    relaxed.required_tiers = {Tier::nano};
    CHECK(std::holds_alternative<FrameMessage>(validate_frame(f, relaxed)));
  }
  SUBCASE("confidence outside [0,1]") {
    f.detections_by_tier[Tier::nano][0][0].confidence = 1.2;
    CHECK(std::get<Rejection>(validate_frame(f)).field == "confidence");
  }
  SUBCASE("degenerate box") {
    f.detections_by_tier[Tier::small][1][0] = det(10, 10, 10, 20, 0.5, 2);
    CHECK(std::get<Rejection>(validate_frame(f)).field == "box");
  }
  SUBCASE("model id disagrees with slot") {
    f.detections_by_tier[Tier::medium][2][0].model_id = 1;
    CHECK(std::get<Rejection>(validate_frame(f)).field == "model_id");
  }
  SUBCASE("too many slots") {
    f.detections_by_tier[Tier::nano].emplace_back();
    CHECK(std::get<Rejection>(validate_frame(f)).field == "detections_by_tier");
  }
  SUBCASE("empty sequence id") {
    f.sequence_id.clear();
    CHECK(std::get<Rejection>(validate_frame(f)).field == "sequence_id");
  }
}

}
