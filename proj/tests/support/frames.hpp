#pragma once

#include "floodsim/domain.hpp"

namespace floodsim::testing {

inline Detection det(double x0, double y0, double x1, double y1, double conf,
                     int model = 1) {
  return Detection{{x0, y0, x1, y1}, conf, model};
}

/// Frame carrying one water box per model on every tier.
inline FrameMessage sample_frame(std::int64_t id = 1) {
  FrameMessage f;
  f.frame_id = id;
  f.sequence_id = "unit";
  f.timestamp = 1000 * id;
  f.motion = MotionCue::slow;
  f.sensor = {20.0, 50.0, 1013.0, f.timestamp};
  for (Tier t : kAllTiers) {
    ModelDetections per_model(kMaxEnsembleSize);
    for (int k = 0; k < kMaxEnsembleSize; ++k) {
      per_model[static_cast<std::size_t>(k)].push_back(
          det(64, 300, 576, 480, 0.6, k + 1));
    }
    f.detections_by_tier[t] = per_model;
  }
  return f;
}

}  // namespace floodsim::testing
