#include "floodsim/domain.hpp"

#include <algorithm>
#include <cmath>

namespace floodsim {

bool BoundingBox::valid() const {
  const bool finite = std::isfinite(x_min) && std::isfinite(y_min) &&
                      std::isfinite(x_max) && std::isfinite(y_max);
  return finite && x_min >= 0.0 && y_min >= 0.0 && x_min < x_max &&
         y_min < y_max;
}

std::string_view to_string(MotionCue m) {
  switch (m) {
    case MotionCue::stopped: return "stopped";
    case MotionCue::slow: return "slow";
    case MotionCue::fast: return "fast";
  }
  return "slow";
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::nano: return "nano";
    case Tier::small: return "small";
    case Tier::medium: return "medium";
    case Tier::large: return "large";
  }
  return "nano";
}

std::string_view to_string(HazardLabel h) {
  switch (h) {
    case HazardLabel::no_flood: return "no_flood";
    case HazardLabel::some_water: return "some_water";
    case HazardLabel::flooded: return "flooded";
  }
  return "no_flood";
}

std::optional<MotionCue> parse_motion(std::string_view s) {
  if (s == "stopped") return MotionCue::stopped;
  if (s == "slow") return MotionCue::slow;
  if (s == "fast") return MotionCue::fast;
  return std::nullopt;
}

std::optional<Tier> parse_tier(std::string_view s) {
  for (Tier t : kAllTiers) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

Tier larger(Tier t) {
  return t == Tier::large ? t : static_cast<Tier>(static_cast<int>(t) + 1);
}

Tier smaller(Tier t) {
  return t == Tier::nano ? t : static_cast<Tier>(static_cast<int>(t) - 1);
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::optional<Rejection> check_sensor(const SensorReading& r) {
  using B = SensorBounds;
  if (!std::isfinite(r.humidity_pct) || r.humidity_pct < B::kMinHumidity ||
      r.humidity_pct > B::kMaxHumidity) {
    return Rejection{"relative_humidity", "relative_humidity out of range"};
  }
  if (!std::isfinite(r.pressure_hpa) || r.pressure_hpa <= B::kMinPressure ||
      r.pressure_hpa >= B::kMaxPressure) {
    return Rejection{"pressure", "pressure out of range"};
  }
  if (!std::isfinite(r.temperature_c) ||
      r.temperature_c <= B::kMinTemperature ||
      r.temperature_c >= B::kMaxTemperature) {
    return Rejection{"temperature", "temperature out of range"};
  }
  return std::nullopt;
}

ValidationResult validate_frame(const FrameMessage& msg,
                                const FrameCheck& check) {
  if (msg.sequence_id.empty()) {
    return Rejection{"sequence_id", "sequence_id empty"};
  }
  if (check.last_frame_id && msg.frame_id <= *check.last_frame_id) {
    return Rejection{"frame_id", "frame_id regression"};
  }
  if (msg.timestamp < 0) {
    return Rejection{"timestamp", "timestamp negative"};
  }
  if (auto bad = check_sensor(msg.sensor)) return *bad;

  for (Tier t : check.required_tiers) {
    if (!msg.detections_by_tier.contains(t)) {
      return Rejection{"detections_by_tier",
                       "detections_by_tier missing tier " +
                           std::string(to_string(t))};
    }
  }
  for (const auto& [tier, per_model] : msg.detections_by_tier) {
    if (static_cast<int>(per_model.size()) > check.max_model_id) {
      return Rejection{"detections_by_tier",
                       "too many ensemble slots for tier " +
                           std::string(to_string(tier))};
    }
    for (std::size_t slot = 0; slot < per_model.size(); ++slot) {
      for (const Detection& d : per_model[slot]) {
        if (!d.box.valid()) {
          return Rejection{"box", "box invalid"};
        }
        if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
          return Rejection{"confidence", "confidence out of range"};
        }
        if (d.model_id != static_cast<int>(slot) + 1) {
          return Rejection{"model_id", "model_id does not match slot"};
        }
      }
    }
  }
  return msg;
}

HazardLabel classify_hazard(double combined_score,
                            const HazardThresholds& thresholds) {
  if (combined_score < thresholds.some_water) return HazardLabel::no_flood;
  if (combined_score < thresholds.flooded) return HazardLabel::some_water;
  return HazardLabel::flooded;
}

}  // namespace floodsim
