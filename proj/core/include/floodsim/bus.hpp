// Virtual clock, event queue and an in-process publish/subscribe bus with
// retained messages, modeled on the MQTT topics of the deployment.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "floodsim/domain.hpp"

namespace floodsim {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discrete-event clock. Events with equal due time fire in scheduling order.
class EventQueue {
 public:
  using Action = std::function<void()>;

  explicit EventQueue(std::size_t max_pending = 1'000'000)
      : max_pending_(max_pending) {}

  Millis now() const { return now_; }

  /// Schedules `action` at `due` (clamped to now). Throws SimulationError
  /// when the pending bound would be exceeded.
  void schedule(Millis due, Action action);
  void schedule_in(Millis delay, Action action) { schedule(now_ + delay, std::move(action)); }

  /// Fires the next event; false when empty.
  bool step();
  /// Drains the queue. Returns the number of events fired.
  std::size_t run();

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t fired() const { return fired_; }

 private:
  struct Event {
    Millis due;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.due != b.due ? a.due > b.due : a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  Millis now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t fired_ = 0;
  std::size_t max_pending_;
};

namespace topics {
inline constexpr std::string_view kSensorData = "sensor/data";
inline constexpr std::string_view kInferenceRequest = "inference/request";
inline constexpr std::string_view kInferenceResponsePrefix = "inference/response/";
inline constexpr std::string_view kJetsonStatus = "inference/jetson/status";

std::string inference_response(std::string_view job_id);
/// True for the four topic families above.
bool is_known(std::string_view topic);
/// Only the Jetson status heartbeat is retained.
bool is_retained(std::string_view topic);
/// MQTT-style filter match with '+' (one level) and trailing '#'.
bool matches(std::string_view filter, std::string_view topic);
}  // namespace topics

/// Offload request. Never carries the nano tier.
struct InferenceJob {
  std::string job_id;
  std::int64_t frame_id = 0;
  Tier tier = Tier::small;
  int ensemble_size = 1;
  ModelDetections detections;
  Millis submitted_at = 0;
};

struct InferenceResult {
  std::string job_id;
  std::int64_t frame_id = 0;
  Tier tier = Tier::small;
  bool rejected = false;  // displaced from the worker's single queue slot
  ModelDetections detections;
  Millis started_at = 0;
  Millis finished_at = 0;
  double energy_j = 0.0;
};

struct Heartbeat {
  Millis sent_at = 0;
  std::string worker = "jetson";
};

using Payload = std::variant<FrameMessage, InferenceJob, InferenceResult, Heartbeat>;

struct TraceEntry {
  enum class Kind { publish, deliver, drop };
  Millis at = 0;
  Kind kind = Kind::publish;
  std::string topic;
  int subscriber = -1;
  std::string summary;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

std::string describe(const Payload& p);
std::string format_trace(const TraceEntry& e);

class Bus {
 public:
  using Handler = std::function<void(const std::string& topic, const Payload&)>;

  Bus(EventQueue& clock, Millis message_latency_ms)
      : clock_(clock), latency_(message_latency_ms) {}

  /// Returns a subscription id. A retained message matching the filter is
  /// delivered immediately (at the current virtual time).
  int subscribe(std::string filter, Handler handler);
  void unsubscribe(int id);

  /// Schedules delivery to every current subscriber after the message
  /// latency. Retained topics also keep the payload for late subscribers.
  /// Returns the number of deliveries scheduled. Throws on unknown topics.
  std::size_t publish(const std::string& topic, Payload payload);

  std::optional<Payload> retained(const std::string& topic) const;
  const std::vector<TraceEntry>& trace() const { return trace_; }
  std::size_t published_count(std::string_view filter) const;

 private:
  struct Subscription {
    std::string filter;
    Handler handler;
    bool active = true;
  };

  void deliver_later(int id, Millis delay, const std::string& topic,
                     const Payload& payload);

  EventQueue& clock_;
  Millis latency_;
  std::map<int, Subscription> subs_;
  std::map<std::string, Payload> retained_;
  std::vector<TraceEntry> trace_;
  int next_id_ = 1;
};

}  // namespace floodsim
