// Per-frame provenance record emitted by the processing node.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floodsim/domain.hpp"
#include "floodsim/fsm.hpp"
#include "floodsim/fusion.hpp"

namespace floodsim {

enum class FrameStatus { decided, dropped, rejected };

std::string_view to_string(FrameStatus s);
std::optional<FrameStatus> parse_frame_status(std::string_view s);

struct DecisionRecord {
  std::int64_t frame_id = 0;
  std::string sequence_id;
  FrameStatus status = FrameStatus::decided;
  std::string reason;  // drop / reject mark; empty for decided frames
  Millis ingest_ms = 0;
  Millis decide_ms = 0;
  MotionCue motion = MotionCue::slow;
  FsmStateId fsm_before = FsmStateId::normal_watch;
  FsmStateId fsm_after = FsmStateId::normal_watch;
  Tier tier = Tier::nano;  // tier that produced the detections
  bool offload = false;
  std::optional<std::string> job_id;
  bool fallback = false;
  std::vector<int> model_detection_counts;
  std::vector<ConsensusBox> consensus_boxes;
  double image_score = 0.0;
  Anomalies anomalies;
  double sensor_boost = 0.0;
  double combined_score = 0.0;
  std::optional<HazardLabel> label;  // absent for dropped / rejected frames
  std::string config_fingerprint;
  double energy_j = 0.0;
  Millis latency_ms = 0;

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

}  // namespace floodsim
