#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "floodsim/fsm.hpp"
#include "support/fsm_table.hpp"

using namespace floodsim;

namespace {

constexpr MotionCue kMotions[] = {MotionCue::stopped, MotionCue::slow, MotionCue::fast};

FsmState in(FsmStateId id) {
  FsmState s;
  s.id = id;
  s.anchor = id;
  return s;
}

FsmStep feed(FsmState s, double score, int times, MotionCue m = MotionCue::slow) {
  FsmStep out{s, Tier::nano, false};
  for (int i = 0; i < times; ++i) {
    out = step(out.next, {score, m, ResourceFlag::normal, false}, {});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("fsm") {

TEST_CASE("tier table") {
  CHECK(tier_for(FsmStateId::normal_watch, MotionCue::slow) == Tier::nano);
  CHECK(tier_for(FsmStateId::normal_watch, MotionCue::fast) == Tier::nano);
  CHECK(tier_for(FsmStateId::uncertainty_investigation, MotionCue::fast) == Tier::small);
  CHECK(tier_for(FsmStateId::uncertainty_investigation, MotionCue::stopped) == Tier::medium);
  CHECK(tier_for(FsmStateId::confirmed_flood, MotionCue::fast) == Tier::small);
  CHECK(tier_for(FsmStateId::confirmed_flood, MotionCue::slow) == Tier::large);
  CHECK(tier_for(FsmStateId::ambiguity_conflict, MotionCue::stopped) == Tier::large);
  CHECK(tier_for(FsmStateId::ambiguity_conflict, MotionCue::fast) == Tier::medium);
  for (MotionCue m : kMotions) {
    CHECK(tier_for(FsmStateId::resource_constrained, m) == Tier::nano);
  }
}

TEST_CASE("slower motion never picks a smaller tier") {
  for (FsmStateId s : kAllFsmStates) {
    CHECK(tier_for(s, MotionCue::stopped) >= tier_for(s, MotionCue::fast));
    CHECK(tier_for(s, MotionCue::slow) >= tier_for(s, MotionCue::fast));
  }
}

TEST_CASE("low scores keep S0 on nano") {
  const FsmStep out = feed(in(FsmStateId::normal_watch), 0.05, 10);
  CHECK(out.next.id == FsmStateId::normal_watch);
  CHECK(out.tier == Tier::nano);
  CHECK_FALSE(out.offload);
}

TEST_CASE("third high frame promotes to S2") {
  FsmState s = in(FsmStateId::normal_watch);
  s.consecutive_high = 2;
  const FsmStep out = step(s, {0.5, MotionCue::stopped, ResourceFlag::normal, false}, {});
  CHECK(out.next.id == FsmStateId::confirmed_flood);
  CHECK(out.tier == Tier::large);
  CHECK(out.offload);
  CHECK(out.next.consecutive_high == 0);  // counters reset on a state change
}

TEST_CASE("mid streak opens S1 and low streak closes it") {
  FsmStep out = feed(in(FsmStateId::normal_watch), 0.25, 3);
  CHECK(out.next.id == FsmStateId::uncertainty_investigation);
  out = feed(out.next, 0.05, 4);
  CHECK(out.next.id == FsmStateId::uncertainty_investigation);
  out = feed(out.next, 0.05, 1);
  CHECK(out.next.id == FsmStateId::normal_watch);
}

TEST_CASE("an interrupted streak starts over") {
  FsmStep out = feed(in(FsmStateId::normal_watch), 0.6, 2);
  out = feed(out.next, 0.25, 1);
  out = feed(out.next, 0.6, 2);
  CHECK(out.next.id == FsmStateId::normal_watch);
}

TEST_CASE("conflict in S1 or S2 goes to S3, and calm frames leave it") {
  for (FsmStateId from : {FsmStateId::uncertainty_investigation, FsmStateId::confirmed_flood}) {
    FsmStep out = step(in(from), {0.3, MotionCue::slow, ResourceFlag::normal, true}, {});
    CHECK(out.next.id == FsmStateId::ambiguity_conflict);
    CHECK(out.tier == Tier::large);
  }
  FsmStep out = feed(in(FsmStateId::ambiguity_conflict), 0.3, 3);
  CHECK(out.next.id == FsmStateId::uncertainty_investigation);
  out = feed(in(FsmStateId::ambiguity_conflict), 0.05, 3);
  CHECK(out.next.id == FsmStateId::normal_watch);
}

TEST_CASE("conflict in S0 is ignored") {
  const FsmStep out =
      step(in(FsmStateId::normal_watch), {0.05, MotionCue::slow, ResourceFlag::normal, true}, {});
  CHECK(out.next.id == FsmStateId::normal_watch);
}

TEST_CASE("constrained resources force S4 and remember the anchor") {
  const FsmStep out = step(in(FsmStateId::confirmed_flood),
                           {0.9, MotionCue::stopped, ResourceFlag::constrained, false}, {});
  CHECK(out.next.id == FsmStateId::resource_constrained);
  CHECK(out.next.anchor == FsmStateId::confirmed_flood);
  CHECK(out.tier == Tier::nano);
  CHECK_FALSE(out.offload);

  const FsmStep again = step(out.next, {0.9, MotionCue::stopped, ResourceFlag::constrained, false}, {});
  CHECK(again.next.anchor == FsmStateId::confirmed_flood);

  const FsmStep back = step(again.next, {0.5, MotionCue::stopped, ResourceFlag::normal, false}, {});
  CHECK(back.next.id == FsmStateId::confirmed_flood);
  CHECK(back.tier == Tier::large);
}

TEST_CASE("constant low input settles in S0 within the demote streak") {
  FsmPolicyParams p;
  for (FsmStateId start : kAllFsmStates) {
    FsmState s = force_constrained(in(FsmStateId::confirmed_flood));
    if (start != FsmStateId::resource_constrained) s = in(start);
    FsmStep out{s, Tier::nano, false};
    int reached = -1;
    for (int i = 1; i <= 20; ++i) {
      out = step(out.next, {0.0, MotionCue::slow, ResourceFlag::normal, false}, p);
      if (reached < 0 && out.next.id == FsmStateId::normal_watch) reached = i;
      if (reached > 0) CHECK(out.next.id == FsmStateId::normal_watch);
    }
    CHECK(reached >= 0);
    CHECK(reached <= p.demote_streak);
  }
}

TEST_CASE("sensor conflict predicate") {
  const FsmPolicyParams p;
  CHECK(sensor_conflict(0.5, -0.08, p));
  CHECK_FALSE(sensor_conflict(0.5, -0.07, p));
  CHECK(sensor_conflict(0.0, 0.08, p));
  CHECK(sensor_conflict(0.1, 0.14, p));
  CHECK_FALSE(sensor_conflict(0.2, 0.14, p));
}

TEST_CASE("policy validation") {
  FsmPolicyParams p;
  p.low_threshold = 0.5;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.promote_streak = 0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("state names") {
  for (FsmStateId s : kAllFsmStates) {
    CHECK(parse_fsm_state(short_name(s)) == s);
    CHECK(parse_fsm_state(long_name(s)) == s);
  }
}

TEST_CASE("exhaustive table matches the golden file") {
  const auto rows = floodsim::testing::enumerate_fsm();
  const std::string table = floodsim::testing::format_fsm_table(rows);
  const std::string path = std::string(FLOODSIM_GOLDEN_DIR) + "/fsm_table.txt";
  if (const char* update = std::getenv("FLOODSIM_UPDATE_GOLDEN"); update && *update == '1') {
    std::ofstream(path) << table;
  }
  CHECK(table == read_file(path));
  for (const auto& row : rows) {
    CHECK(row.out.offload == (row.out.tier != Tier::nano));
    if (row.inputs.resource == ResourceFlag::constrained) {
      CHECK(row.out.next.id == FsmStateId::resource_constrained);
      CHECK(row.out.tier == Tier::nano);
    }
    CHECK(row.out.next.anchor != FsmStateId::resource_constrained);
    // Pure: a second evaluation gives the same answer.
    const FsmStep again = step(row.before, row.inputs, {});
    CHECK(again.next == row.out.next);
  }
}

}
