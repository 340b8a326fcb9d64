#include "floodsim/fsm.hpp"

namespace floodsim {

std::string_view short_name(FsmStateId s) {
  switch (s) {
    case FsmStateId::normal_watch: return "S0";
    case FsmStateId::uncertainty_investigation: return "S1";
    case FsmStateId::confirmed_flood: return "S2";
    case FsmStateId::ambiguity_conflict: return "S3";
    case FsmStateId::resource_constrained: return "S4";
  }
  return "S0";
}

std::string_view long_name(FsmStateId s) {
  switch (s) {
    case FsmStateId::normal_watch: return "NormalWatch";
    case FsmStateId::uncertainty_investigation: return "UncertaintyInvestigation";
    case FsmStateId::confirmed_flood: return "ConfirmedFlood";
    case FsmStateId::ambiguity_conflict: return "AmbiguityConflict";
    case FsmStateId::resource_constrained: return "ResourceConstrained";
  }
  return "NormalWatch";
}

std::optional<FsmStateId> parse_fsm_state(std::string_view s) {
  for (FsmStateId id : kAllFsmStates) {
    if (short_name(id) == s || long_name(id) == s) return id;
  }
  return std::nullopt;
}

void FsmPolicyParams::validate() const {
  if (!(0.0 < low_threshold && low_threshold < high_threshold)) {
    throw DomainError("fsm thresholds must satisfy 0 < low < high");
  }
  if (promote_streak < 1 || demote_streak < 1) {
    throw DomainError("fsm streaks must be >= 1");
  }
}

ScoreBand classify_band(double score, const FsmPolicyParams& params) {
  if (score < params.low_threshold) return ScoreBand::low;
  if (score < params.high_threshold) return ScoreBand::mid;
  return ScoreBand::high;
}

Tier tier_for(FsmStateId state, MotionCue motion) {
  const bool fast = motion == MotionCue::fast;
  switch (state) {
    case FsmStateId::normal_watch: return Tier::nano;
    case FsmStateId::uncertainty_investigation:
      return fast ? Tier::small : Tier::medium;
    case FsmStateId::confirmed_flood: return fast ? Tier::small : Tier::large;
    case FsmStateId::ambiguity_conflict: return fast ? Tier::medium : Tier::large;
    case FsmStateId::resource_constrained: return Tier::nano;
  }
  return Tier::nano;
}

FsmState force_constrained(const FsmState& state) {
  FsmState next;
  next.id = FsmStateId::resource_constrained;
  next.anchor = state.id == FsmStateId::resource_constrained ? state.anchor
                                                             : state.id;
  return next;
}

namespace {

FsmState enter(FsmStateId id) {
  FsmState s;
  s.id = id;
  s.anchor = id;
  return s;
}

}  // namespace

FsmStep step(const FsmState& state, const FsmInputs& inputs,
             const FsmPolicyParams& params) {
  if (inputs.resource == ResourceFlag::constrained) {
    return FsmStep{force_constrained(state), Tier::nano, false};
  }

  FsmState cur = state.id == FsmStateId::resource_constrained
                     ? enter(state.anchor)
                     : state;

  switch (classify_band(inputs.combined_score, params)) {
    case ScoreBand::low:
      ++cur.consecutive_low;
      cur.consecutive_mid = cur.consecutive_high = 0;
      break;
    case ScoreBand::mid:
      ++cur.consecutive_mid;
      cur.consecutive_low = cur.consecutive_high = 0;
      break;
    case ScoreBand::high:
      ++cur.consecutive_high;
      cur.consecutive_low = cur.consecutive_mid = 0;
      break;
  }
  cur.consecutive_calm = inputs.conflict ? 0 : cur.consecutive_calm + 1;

  const ScoreBand band = classify_band(inputs.combined_score, params);
  FsmStateId target = cur.id;
  using S = FsmStateId;
  if (inputs.conflict &&
      (cur.id == S::uncertainty_investigation || cur.id == S::confirmed_flood)) {
    target = S::ambiguity_conflict;
  } else if (cur.consecutive_high >= params.promote_streak &&
             cur.id != S::confirmed_flood) {
    target = S::confirmed_flood;
  } else {
    switch (cur.id) {
      case S::normal_watch:
        if (cur.consecutive_mid >= params.promote_streak) {
          target = S::uncertainty_investigation;
        }
        break;
      case S::uncertainty_investigation:
      case S::confirmed_flood:
        if (cur.consecutive_low >= params.demote_streak) target = S::normal_watch;
        break;
      case S::ambiguity_conflict:
        if (cur.consecutive_calm >= params.promote_streak) {
          target = band == ScoreBand::low ? S::normal_watch
                                          : S::uncertainty_investigation;
        }
        break;
      case S::resource_constrained:
        break;  // unreachable, S4 was resolved to its anchor above
    }
  }

  FsmState next = target == cur.id ? cur : enter(target);
  next.anchor = next.id;
  const Tier tier = tier_for(next.id, inputs.motion);
  return FsmStep{next, tier, tier != Tier::nano};
}

bool sensor_conflict(double image_score, double boost,
                     const FsmPolicyParams& params) {
  const ScoreBand image_band = classify_band(image_score, params);
  return (image_band == ScoreBand::high && boost <= -0.08) ||
         (image_band == ScoreBand::low && boost >= 0.08);
}

}  // namespace floodsim
