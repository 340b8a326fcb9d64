// Motion-aware five-state control FSM that picks the next state and the
// inference tier for each frame.
#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "floodsim/domain.hpp"

namespace floodsim {

enum class FsmStateId {
  normal_watch = 0,               // S0
  uncertainty_investigation = 1,  // S1
  confirmed_flood = 2,            // S2
  ambiguity_conflict = 3,         // S3
  resource_constrained = 4,       // S4
};

inline constexpr std::array<FsmStateId, 5> kAllFsmStates{
    FsmStateId::normal_watch, FsmStateId::uncertainty_investigation,
    FsmStateId::confirmed_flood, FsmStateId::ambiguity_conflict,
    FsmStateId::resource_constrained};

/// "S0".."S4".
std::string_view short_name(FsmStateId s);
std::string_view long_name(FsmStateId s);
std::optional<FsmStateId> parse_fsm_state(std::string_view s);

enum class ResourceFlag { normal, constrained };

enum class ScoreBand { low, mid, high };

struct FsmState {
  FsmStateId id = FsmStateId::normal_watch;
  /// State to restore when leaving S4. Never S4; equals `id` outside S4.
  FsmStateId anchor = FsmStateId::normal_watch;
  int consecutive_low = 0;
  int consecutive_mid = 0;
  int consecutive_high = 0;
  /// Consecutive conflict-free frames, used to leave S3.
  int consecutive_calm = 0;

  friend bool operator==(const FsmState&, const FsmState&) = default;
};

struct FsmInputs {
  double combined_score = 0.0;
  MotionCue motion = MotionCue::slow;
  ResourceFlag resource = ResourceFlag::normal;
  bool conflict = false;
};

struct FsmPolicyParams {
  double low_threshold = 0.15;
  double high_threshold = 0.40;
  int promote_streak = 3;
  int demote_streak = 5;

  void validate() const;
};

struct FsmStep {
  FsmState next;
  Tier tier = Tier::nano;
  bool offload = false;
};

ScoreBand classify_band(double score, const FsmPolicyParams& params);

/// Tier table: S0 nano; S1 small|medium; S2 small|large; S3 medium|large;
/// S4 nano. Fast motion takes the smaller tier, stopped/slow the larger.
Tier tier_for(FsmStateId state, MotionCue motion);

/// One control step. Total and pure.
FsmStep step(const FsmState& state, const FsmInputs& inputs,
             const FsmPolicyParams& params);

/// Puts the machine in S4 remembering the current state as anchor.
FsmState force_constrained(const FsmState& state);

/// Image/sensor disagreement: image band high while the boost is at most
/// -0.08, or image band low while the boost is at least +0.08.
bool sensor_conflict(double image_score, double boost,
                     const FsmPolicyParams& params);

}  // namespace floodsim
