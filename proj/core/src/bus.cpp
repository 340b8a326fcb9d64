#include "floodsim/bus.hpp"

#include <sstream>

namespace floodsim {

void EventQueue::schedule(Millis due, Action action) {
  if (queue_.size() >= max_pending_) {
    throw SimulationError("event queue bound exceeded (" +
                          std::to_string(max_pending_) + " pending events)");
  }
  queue_.push(Event{due < now_ ? now_ : due, next_seq_++, std::move(action)});
}

bool EventQueue::step() {
  if (queue_.empty()) return false;
  // priority_queue::top is const; move the action out before popping.
  Event ev = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  now_ = ev.due;
  ++fired_;
  ev.action();
  return true;
}

std::size_t EventQueue::run() {
  std::size_t n = 0;
  while (step()) ++n;
  return n;
}

namespace topics {

std::string inference_response(std::string_view job_id) {
  return std::string(kInferenceResponsePrefix) + std::string(job_id);
}

bool is_known(std::string_view topic) {
  if (topic == kSensorData || topic == kInferenceRequest || topic == kJetsonStatus) {
    return true;
  }
  return topic.size() > kInferenceResponsePrefix.size() &&
         topic.starts_with(kInferenceResponsePrefix) &&
         topic.find('/', kInferenceResponsePrefix.size()) == std::string_view::npos;
}

bool is_retained(std::string_view topic) { return topic == kJetsonStatus; }

bool matches(std::string_view filter, std::string_view topic) {
  while (true) {
    const auto fslash = filter.find('/');
    const auto tslash = topic.find('/');
    const std::string_view flevel = filter.substr(0, fslash);
    const std::string_view tlevel = topic.substr(0, tslash);
    if (flevel == "#") return true;
    if (flevel != "+" && flevel != tlevel) return false;
    const bool fend = fslash == std::string_view::npos;
    const bool tend = tslash == std::string_view::npos;
    if (fend || tend) return fend && tend;
    filter.remove_prefix(fslash + 1);
    topic.remove_prefix(tslash + 1);
  }
}

}  // namespace topics

std::string describe(const Payload& p) {
  struct Visitor {
    std::string operator()(const FrameMessage& f) const {
      return "frame " + std::to_string(f.frame_id);
    }
    std::string operator()(const InferenceJob& j) const {
      return "job " + j.job_id + " tier " + std::string(to_string(j.tier));
    }
    std::string operator()(const InferenceResult& r) const {
      return std::string(r.rejected ? "rejected " : "result ") + r.job_id;
    }
    std::string operator()(const Heartbeat& h) const {
      return "heartbeat " + std::to_string(h.sent_at);
    }
  };
  return std::visit(Visitor{}, p);
}

std::string format_trace(const TraceEntry& e) {
  std::ostringstream os;
  const char* kind = e.kind == TraceEntry::Kind::publish   ? "pub"
                     : e.kind == TraceEntry::Kind::deliver ? "dlv"
                                                           : "drp";
  os << e.at << ' ' << kind << ' ' << e.topic << ' ' << e.subscriber << ' '
     << e.summary;
  return os.str();
}

int Bus::subscribe(std::string filter, Handler handler) {
  const int id = next_id_++;
  subs_[id] = Subscription{filter, std::move(handler), true};
  for (const auto& [topic, payload] : retained_) {
    if (topics::matches(filter, topic)) deliver_later(id, 0, topic, payload);
  }
  return id;
}

void Bus::unsubscribe(int id) {
  auto it = subs_.find(id);
  if (it != subs_.end()) it->second.active = false;
}

std::size_t Bus::publish(const std::string& topic, Payload payload) {
  if (!topics::is_known(topic)) {
    throw SimulationError("publish to unknown topic '" + topic + "'");
  }
  trace_.push_back({clock_.now(), TraceEntry::Kind::publish, topic, -1,
                    describe(payload)});
  if (topics::is_retained(topic)) retained_[topic] = payload;
  std::size_t scheduled = 0;
  for (const auto& [id, sub] : subs_) {
    if (sub.active && topics::matches(sub.filter, topic)) {
      deliver_later(id, latency_, topic, payload);
      ++scheduled;
    }
  }
  if (scheduled == 0 && !topics::is_retained(topic)) {
    trace_.push_back({clock_.now(), TraceEntry::Kind::drop, topic, -1,
                      describe(payload)});
  }
  return scheduled;
}

void Bus::deliver_later(int id, Millis delay, const std::string& topic,
                        const Payload& payload) {
  clock_.schedule_in(delay, [this, id, topic, payload] {
    auto it = subs_.find(id);
    if (it == subs_.end() || !it->second.active) return;
    trace_.push_back({clock_.now(), TraceEntry::Kind::deliver, topic, id,
                      describe(payload)});
    it->second.handler(topic, payload);
  });
}

std::optional<Payload> Bus::retained(const std::string& topic) const {
  auto it = retained_.find(topic);
  if (it == retained_.end()) return std::nullopt;
  return it->second;
}

std::size_t Bus::published_count(std::string_view filter) const {
  std::size_t n = 0;
  for (const TraceEntry& e : trace_) {
    if (e.kind == TraceEntry::Kind::publish && topics::matches(filter, e.topic)) ++n;
  }
  return n;
}

}  // namespace floodsim
