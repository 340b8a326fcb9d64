#include "floodsim/health.hpp"

namespace floodsim {

std::string_view to_string(Breaker b) {
  return b == Breaker::open ? "open" : "closed";
}

bool breaker_should_open(const WorkerHealth& h, Millis now) {
  const bool stale =
      now - h.last_heartbeat_at > static_cast<Millis>(h.miss_limit) * h.heartbeat_period;
  return stale || h.consecutive_timeouts >= h.miss_limit;
}

WorkerHealth health_update(const WorkerHealth& h, HealthEvent event, Millis now) {
  WorkerHealth out = h;
  switch (event) {
    case HealthEvent::heartbeat:
      out.last_heartbeat_at = now;
      // A heartbeat while open is the half-open probe: start counting afresh.
      if (h.breaker == Breaker::open) out.consecutive_timeouts = 0;
      break;
    case HealthEvent::response:
      out.consecutive_timeouts = 0;
      break;
    case HealthEvent::timeout:
      out.consecutive_timeouts += 1;
      break;
    case HealthEvent::tick:
      break;
  }
  out.breaker = breaker_should_open(out, now) ? Breaker::open : Breaker::closed;
  return out;
}

}  // namespace floodsim
