// Shared vocabulary for the flood-detection control plane: boxes, detections,
// tiers, motion cues, sensor readings and the ingress frame message.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace floodsim {

/// Virtual time in milliseconds.
using Millis = std::int64_t;

/// Number of ensemble slots in the roster (Model 1..3).
inline constexpr int kMaxEnsembleSize = 3;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box in image pixel coordinates.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool valid() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  BoundingBox box;
  double confidence = 0.0;
  int model_id = 1;

  friend bool operator==(const Detection&, const Detection&) = default;
};

/// Merged product of one IoU group: confidence-weighted box, summed
/// confidence C and number of distinct contributing models M.
struct ConsensusBox {
  BoundingBox box;
  double summed_confidence = 0.0;
  int agreement = 1;

  friend bool operator==(const ConsensusBox&, const ConsensusBox&) = default;
};

enum class MotionCue { stopped, slow, fast };

/// Detector size. The enumerator order is the tier order.
enum class Tier { nano = 0, small = 1, medium = 2, large = 3 };

inline constexpr std::array<Tier, 4> kAllTiers{Tier::nano, Tier::small,
                                               Tier::medium, Tier::large};

enum class HazardLabel { no_flood = 0, some_water = 1, flooded = 2 };

std::string_view to_string(MotionCue m);
std::string_view to_string(Tier t);
std::string_view to_string(HazardLabel h);
std::optional<MotionCue> parse_motion(std::string_view s);
std::optional<Tier> parse_tier(std::string_view s);

/// One step larger / smaller, saturating at the ends of the tier order.
Tier larger(Tier t);
Tier smaller(Tier t);

struct SensorReading {
  double temperature_c = 20.0;
  double humidity_pct = 50.0;
  double pressure_hpa = 1013.0;
  Millis timestamp = 0;

  friend bool operator==(const SensorReading&, const SensorReading&) = default;
};

/// Plausibility bounds; readings outside are sensor faults.
struct SensorBounds {
  static constexpr double kMinHumidity = 0.0;
  static constexpr double kMaxHumidity = 100.0;
  static constexpr double kMinPressure = 800.0;   // exclusive
  static constexpr double kMaxPressure = 1100.0;  // exclusive
  static constexpr double kMinTemperature = -60.0;
  static constexpr double kMaxTemperature = 70.0;
};

/// Per-model detection lists for one tier. Index k holds model k+1.
using ModelDetections = std::vector<std::vector<Detection>>;

/// The single ingress message type. `detections_by_tier` stands in for the
/// image: for every tier it lists what each ensemble model would report.
struct FrameMessage {
  std::int64_t frame_id = 0;
  Millis timestamp = 0;
  MotionCue motion = MotionCue::slow;
  SensorReading sensor;
  std::map<Tier, ModelDetections> detections_by_tier;
  std::string sequence_id;

  friend bool operator==(const FrameMessage&, const FrameMessage&) = default;
};

struct Rejection {
  std::string field;
  std::string reason;

  std::string message() const { return reason; }
};

struct FrameCheck {
  std::optional<std::int64_t> last_frame_id;
  std::vector<Tier> required_tiers{kAllTiers.begin(), kAllTiers.end()};
  int max_model_id = kMaxEnsembleSize;
};

using ValidationResult = std::variant<FrameMessage, Rejection>;

double iou(const BoundingBox& a, const BoundingBox& b);

/// Returns the message unchanged when every field invariant holds, otherwise
/// the first violated invariant.
ValidationResult validate_frame(const FrameMessage& msg,
                                const FrameCheck& check = {});

/// First violated sensor plausibility bound, if any.
std::optional<Rejection> check_sensor(const SensorReading& reading);

struct HazardThresholds {
  double some_water = 0.15;
  double flooded = 0.40;
};

HazardLabel classify_hazard(double combined_score,
                            const HazardThresholds& thresholds = {});

}  // namespace floodsim
