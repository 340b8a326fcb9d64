// Node actors of the three-node deployment: Gathering (ingress), Processing
// (single owner of FSM, baselines and decisions) and the Jetson worker.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "floodsim/bus.hpp"
#include "floodsim/consensus.hpp"
#include "floodsim/cost_model.hpp"
#include "floodsim/decision_record.hpp"
#include "floodsim/fsm.hpp"
#include "floodsim/fusion.hpp"
#include "floodsim/health.hpp"
#include "floodsim/scenario.hpp"

namespace floodsim {

struct ScheduledPublication {
  Millis at = 0;
  FrameMessage frame;  // timestamp already set to `at`
};

/// One sensor/data publication per frame at fixed intervals from t = 0.
/// Throws SimulationError for an empty sequence or non-increasing ids.
std::vector<ScheduledPublication> gathering_node_emit(
    const std::vector<FrameMessage>& sequence, Millis frame_interval);

class GatheringNode {
 public:
  GatheringNode(EventQueue& clock, Bus& bus) : clock_(clock), bus_(bus) {}
  /// Schedules every publication; returns the number of frames.
  std::size_t start(const std::vector<FrameMessage>& sequence, Millis frame_interval);

 private:
  EventQueue& clock_;
  Bus& bus_;
};

/// Stateless accelerator: one job executing, one queued (latest wins).
class JetsonNode {
 public:
  JetsonNode(EventQueue& clock, Bus& bus, const CostModel& cost,
             std::uint64_t seed, Millis heartbeat_period);

  /// Subscribes to inference/request and starts heartbeating.
  void start();
  /// Handles one job: executes, queues (displacing and rejecting any queued
  /// job), or ignores it when offline.
  void serve(const InferenceJob& job);

  void go_offline();
  void go_online();
  /// Stops the heartbeat loop so the event queue can drain.
  void stop() { stopped_ = true; }

  bool online() const { return online_; }
  bool busy() const { return current_.has_value(); }
  bool has_queued() const { return queued_.has_value(); }
  double inference_energy_j() const { return inference_energy_j_; }
  double resident_energy_j() const { return resident_energy_j_; }
  std::size_t completed_jobs() const { return completed_; }

 private:
  void begin(InferenceJob job);
  void finish(std::uint64_t generation);
  void heartbeat_loop();
  void publish_heartbeat();
  void account_residency();

  EventQueue& clock_;
  Bus& bus_;
  const CostModel& cost_;
  std::uint64_t seed_;
  Millis heartbeat_period_;
  bool online_ = true;
  bool stopped_ = false;
  std::optional<InferenceJob> current_;
  std::optional<InferenceJob> queued_;
  Millis current_started_ = 0;
  std::uint64_t generation_ = 0;
  double inference_energy_j_ = 0.0;
  double resident_energy_j_ = 0.0;
  std::size_t completed_ = 0;
};

struct BreakerChange {
  Millis at = 0;
  Breaker breaker = Breaker::closed;
};

/// The control-plane owner. Frames are decided strictly one at a time; while
/// busy, a single-slot buffer keeps only the newest waiting frame.
class ProcessingNode {
 public:
  using RecordSink = std::function<void(DecisionRecord)>;

  ProcessingNode(EventQueue& clock, Bus& bus, const RunConfig& config,
                 DiurnalBaselines baselines, Millis start_clock_ms,
                 std::string fingerprint, RecordSink sink);

  void start();
  /// Entry point for every sensor/data delivery.
  void on_frame(const FrameMessage& frame);

  const FsmState& fsm_state() const { return fsm_; }
  const WorkerHealth& health() const { return health_; }
  const DiurnalBaselines& baselines() const { return baselines_; }
  bool busy() const { return active_.has_value(); }
  bool has_buffered() const { return buffered_.has_value(); }
  std::size_t offload_jobs() const { return offload_jobs_; }
  std::size_t max_buffered_observed() const { return max_buffered_; }
  double inference_energy_j() const { return inference_energy_j_; }
  double transfer_energy_j() const { return transfer_energy_j_; }
  const std::vector<BreakerChange>& breaker_changes() const { return breaker_changes_; }
  /// True if an offload was ever published while the breaker was open.
  bool offloaded_while_open() const { return offloaded_while_open_; }

 private:
  struct Arrival {
    FrameMessage frame;
    Millis ingest_ms = 0;
  };
  struct Active {
    Arrival arrival;
    DiurnalPeriod period = DiurnalPeriod::midday;
    Anomalies anomalies;
    double boost = 0.0;
    FsmStateId fsm_before = FsmStateId::normal_watch;
    Tier tier = Tier::nano;
    bool offload = false;
    bool fallback = false;
    std::optional<std::string> job_id;
    double energy_j = 0.0;
  };

  void begin(Arrival arrival);
  void run_local(Tier tier);
  void offload(Tier tier);
  void on_response(const InferenceResult& result);
  void on_timeout(const std::string& job_id);
  void on_heartbeat();
  void fall_back();
  void decide(const ModelDetections& detections);
  void finish_frame();
  void emit_skipped(const Arrival& arrival, FrameStatus status, std::string reason);
  void refresh_health(HealthEvent event);
  ResourceFlag resource_flag() const;
  bool uses_worker() const;
  Tier select_tier(Tier fsm_tier, MotionCue motion, ResourceFlag resource) const;
  const ModelDetections& detections_for(const FrameMessage& frame, Tier tier) const;

  EventQueue& clock_;
  Bus& bus_;
  const RunConfig& config_;
  AggregationParams aggregation_;
  DiurnalBaselines baselines_;
  Millis start_clock_ms_;
  std::string fingerprint_;
  RecordSink sink_;

  FsmState fsm_;
  WorkerHealth health_;
  bool awaiting_heartbeat_ = false;
  std::optional<std::int64_t> last_frame_id_;
  std::optional<Active> active_;
  std::optional<Arrival> buffered_;
  std::size_t max_buffered_ = 0;

  double prev_combined_ = 0.0;
  bool prev_conflict_ = false;
  std::optional<HazardLabel> prev_label_;

  std::size_t offload_jobs_ = 0;
  std::uint64_t job_counter_ = 0;
  double inference_energy_j_ = 0.0;
  double transfer_energy_j_ = 0.0;
  std::vector<BreakerChange> breaker_changes_;
  bool offloaded_while_open_ = false;
};

}  // namespace floodsim
