// Worker health tracking and the offload circuit breaker.
#pragma once

#include <string_view>

#include "floodsim/domain.hpp"

namespace floodsim {

enum class Breaker { closed, open };

enum class HealthEvent { heartbeat, timeout, response, tick };

std::string_view to_string(Breaker b);

/// Invariant after every update: breaker is open iff the last heartbeat is
/// older than miss_limit periods or miss_limit timeouts happened in a row.
struct WorkerHealth {
  Millis last_heartbeat_at = 0;
  Millis heartbeat_period = 1000;
  int miss_limit = 3;
  int consecutive_timeouts = 0;
  Breaker breaker = Breaker::closed;

  friend bool operator==(const WorkerHealth&, const WorkerHealth&) = default;
};

/// heartbeat refreshes liveness (and, when the breaker was open, clears the
/// timeout streak); response clears the timeout streak; timeout extends it;
/// tick only re-evaluates staleness at `now`.
WorkerHealth health_update(const WorkerHealth& h, HealthEvent event, Millis now);

bool breaker_should_open(const WorkerHealth& h, Millis now);

}  // namespace floodsim
