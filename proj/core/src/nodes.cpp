#include "floodsim/nodes.hpp"

#include <algorithm>

namespace floodsim {

std::vector<ScheduledPublication> gathering_node_emit(
    const std::vector<FrameMessage>& sequence, Millis frame_interval) {
  if (sequence.empty()) throw SimulationError("gathering node: empty sequence");
  if (frame_interval <= 0) throw SimulationError("gathering node: interval must be > 0");
  std::vector<ScheduledPublication> out;
  out.reserve(sequence.size());
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (i > 0 && sequence[i].frame_id <= sequence[i - 1].frame_id) {
      throw SimulationError("gathering node: frame ids must strictly increase");
    }
    ScheduledPublication p;
    p.at = static_cast<Millis>(i) * frame_interval;
    p.frame = sequence[i];
    p.frame.timestamp = p.at;
    p.frame.sensor.timestamp = p.at;
    out.push_back(std::move(p));
  }
  return out;
}

std::size_t GatheringNode::start(const std::vector<FrameMessage>& sequence,
                                 Millis frame_interval) {
  auto schedule = gathering_node_emit(sequence, frame_interval);
  for (auto& pub : schedule) {
    clock_.schedule(pub.at, [this, frame = std::move(pub.frame)] {
      bus_.publish(std::string(topics::kSensorData), frame);
    });
  }
  return schedule.size();
}

// --- Jetson worker ----------------------------------------------------------

JetsonNode::JetsonNode(EventQueue& clock, Bus& bus, const CostModel& cost,
                       std::uint64_t seed, Millis heartbeat_period)
    : clock_(clock),
      bus_(bus),
      cost_(cost),
      seed_(seed),
      heartbeat_period_(heartbeat_period) {}

void JetsonNode::start() {
  bus_.subscribe(std::string(topics::kInferenceRequest),
                 [this](const std::string&, const Payload& p) {
                   if (const auto* job = std::get_if<InferenceJob>(&p)) serve(*job);
                 });
  heartbeat_loop();
}

void JetsonNode::serve(const InferenceJob& job) {
  if (!online_) return;
  if (!current_) {
    begin(job);
    return;
  }
  if (queued_) {
    InferenceResult rejection;
    rejection.job_id = queued_->job_id;
    rejection.frame_id = queued_->frame_id;
    rejection.tier = queued_->tier;
    rejection.rejected = true;
    rejection.started_at = rejection.finished_at = clock_.now();
    bus_.publish(topics::inference_response(queued_->job_id), rejection);
  }
  queued_ = job;
}

void JetsonNode::begin(InferenceJob job) {
  const Millis latency = cost_.inference_latency(job.tier, Device::worker,
                                                 job.ensemble_size, seed_, job.frame_id);
  current_ = std::move(job);
  current_started_ = clock_.now();
  const std::uint64_t gen = ++generation_;
  clock_.schedule_in(latency, [this, gen] { finish(gen); });
}

void JetsonNode::finish(std::uint64_t generation) {
  if (generation != generation_ || !current_) return;
  account_residency();
  const double energy =
      cost_.inference_energy(current_->tier, Device::worker, current_->ensemble_size);
  inference_energy_j_ += energy;

  InferenceResult result;
  result.job_id = current_->job_id;
  result.frame_id = current_->frame_id;
  result.tier = current_->tier;
  result.detections = current_->detections;
  result.started_at = current_started_;
  result.finished_at = clock_.now();
  result.energy_j = energy;
  ++completed_;
  current_.reset();
  const std::string topic = topics::inference_response(result.job_id);
  bus_.publish(topic, std::move(result));

  if (queued_) {
    InferenceJob next = std::move(*queued_);
    queued_.reset();
    begin(std::move(next));
  }
}

void JetsonNode::account_residency() {
  resident_energy_j_ += cost_.worker_resident_w *
                        static_cast<double>(clock_.now() - current_started_) / 1000.0;
}

void JetsonNode::heartbeat_loop() {
  if (stopped_) return;
  if (online_) publish_heartbeat();
  clock_.schedule_in(heartbeat_period_, [this] { heartbeat_loop(); });
}

void JetsonNode::publish_heartbeat() {
  bus_.publish(std::string(topics::kJetsonStatus), Heartbeat{clock_.now(), "jetson"});
}

void JetsonNode::go_offline() {
  if (!online_) return;
  if (current_) {
    account_residency();
    current_.reset();
  }
  queued_.reset();
  ++generation_;
  online_ = false;
}

void JetsonNode::go_online() {
  if (online_) return;
  online_ = true;
  if (!stopped_) publish_heartbeat();
}

// --- Processing node --------------------------------------------------------

ProcessingNode::ProcessingNode(EventQueue& clock, Bus& bus, const RunConfig& config,
                               DiurnalBaselines baselines, Millis start_clock_ms,
                               std::string fingerprint, RecordSink sink)
    : clock_(clock),
      bus_(bus),
      config_(config),
      aggregation_(config.aggregation),
      baselines_(std::move(baselines)),
      start_clock_ms_(start_clock_ms),
      fingerprint_(std::move(fingerprint)),
      sink_(std::move(sink)) {
  aggregation_.ensemble_size = config.ablation.ensemble_size;
  health_.heartbeat_period = config.heartbeat_period_ms;
  health_.miss_limit = config.miss_limit;
}

bool ProcessingNode::uses_worker() const {
  return config_.ablation.worker_enabled &&
         config_.ablation.offload != OffloadPolicy::none;
}

void ProcessingNode::start() {
  bus_.subscribe(std::string(topics::kSensorData),
                 [this](const std::string&, const Payload& p) {
                   if (const auto* f = std::get_if<FrameMessage>(&p)) on_frame(*f);
                 });
  if (!uses_worker()) return;
  bus_.subscribe(std::string(topics::kInferenceResponsePrefix) + "+",
                 [this](const std::string&, const Payload& p) {
                   if (const auto* r = std::get_if<InferenceResult>(&p)) on_response(*r);
                 });
  bus_.subscribe(std::string(topics::kJetsonStatus),
                 [this](const std::string&, const Payload& p) {
                   if (std::holds_alternative<Heartbeat>(p)) on_heartbeat();
                 });
}

void ProcessingNode::on_frame(const FrameMessage& frame) {
  Arrival arrival{frame, clock_.now()};

  FrameCheck check;
  check.last_frame_id = last_frame_id_;
  check.required_tiers = config_.ablation.tiers;
  if (uses_worker() && !config_.ablation.allows(Tier::nano)) {
    check.required_tiers.push_back(Tier::nano);
  }
  if (!config_.ablation.fsm_enabled &&
      !config_.ablation.allows(config_.ablation.static_tier)) {
    check.required_tiers.push_back(config_.ablation.static_tier);
  }

  const ValidationResult verdict = validate_frame(frame, check);
  if (const auto* rejection = std::get_if<Rejection>(&verdict)) {
    if (rejection->field != "frame_id") last_frame_id_ = frame.frame_id;
    emit_skipped(arrival, FrameStatus::rejected, rejection->reason);
    return;
  }
  last_frame_id_ = frame.frame_id;

  if (active_) {
    if (buffered_) {
      emit_skipped(*buffered_, FrameStatus::dropped,
                   "superseded by frame " + std::to_string(frame.frame_id));
    }
    buffered_ = std::move(arrival);
    max_buffered_ = std::max<std::size_t>(max_buffered_, 1);
    return;
  }
  begin(std::move(arrival));
}

ResourceFlag ProcessingNode::resource_flag() const {
  if (!uses_worker()) return ResourceFlag::normal;
  return (health_.breaker == Breaker::open || awaiting_heartbeat_)
             ? ResourceFlag::constrained
             : ResourceFlag::normal;
}

Tier ProcessingNode::select_tier(Tier fsm_tier, MotionCue motion,
                                 ResourceFlag resource) const {
  Tier tier = fsm_tier;
  switch (config_.ablation.offload) {
    case OffloadPolicy::force_medium_on_fast:
      if (motion == MotionCue::fast && resource == ResourceFlag::normal) {
        tier = Tier::medium;
      }
      break;
    case OffloadPolicy::always_medium:
      tier = Tier::medium;
      break;
    case OffloadPolicy::none:
    case OffloadPolicy::adaptive:
      break;
  }
  return config_.ablation.clamp(tier);
}

void ProcessingNode::begin(Arrival arrival) {
  Active act;
  const FrameMessage& frame = arrival.frame;
  act.period = period_of(start_clock_ms_ + frame.timestamp);
  act.anomalies = anomalies(baselines_, frame.sensor, act.period);
  act.boost = config_.ablation.fusion_enabled
                  ? sensor_boost(act.anomalies, config_.boost)
                  : 0.0;
  act.fsm_before = fsm_.id;
  act.arrival = std::move(arrival);

  refresh_health(HealthEvent::tick);
  const ResourceFlag resource = resource_flag();

  Tier tier = config_.ablation.static_tier;
  if (config_.ablation.fsm_enabled) {
    const FsmInputs inputs{prev_combined_, act.arrival.frame.motion, resource,
                           prev_conflict_};
    const FsmStep out = step(fsm_, inputs, config_.fsm);
    fsm_ = out.next;
    tier = out.tier;
  }
  tier = select_tier(tier, act.arrival.frame.motion, resource);
  active_ = std::move(act);

  if (uses_worker() && tier != Tier::nano) {
    if (resource == ResourceFlag::normal && health_.breaker == Breaker::closed) {
      offload(tier);
    } else {
      run_local(Tier::nano);
    }
    return;
  }
  run_local(tier);
}

const ModelDetections& ProcessingNode::detections_for(const FrameMessage& frame,
                                                      Tier tier) const {
  static const ModelDetections kEmpty;
  auto it = frame.detections_by_tier.find(tier);
  return it == frame.detections_by_tier.end() ? kEmpty : it->second;
}

void ProcessingNode::run_local(Tier tier) {
  Active& act = *active_;
  const int n = config_.ablation.ensemble_size;
  const Millis latency = config_.cost.inference_latency(
      tier, Device::processing, n, config_.seed, act.arrival.frame.frame_id);
  const double energy = config_.cost.inference_energy(tier, Device::processing, n);
  act.tier = tier;
  act.energy_j += energy;
  inference_energy_j_ += energy;
  const std::int64_t frame_id = act.arrival.frame.frame_id;
  clock_.schedule_in(latency, [this, tier, frame_id] {
    if (!active_ || active_->arrival.frame.frame_id != frame_id) return;
    decide(detections_for(active_->arrival.frame, tier));
  });
}

void ProcessingNode::offload(Tier tier) {
  Active& act = *active_;
  const FrameMessage& frame = act.arrival.frame;
  const int n = config_.ablation.ensemble_size;

  InferenceJob job;
  job.job_id = frame.sequence_id + "-" + std::to_string(frame.frame_id) + "-" +
               std::to_string(++job_counter_);
  job.frame_id = frame.frame_id;
  job.tier = tier;
  job.ensemble_size = n;
  const ModelDetections& all = detections_for(frame, tier);
  job.detections.assign(all.begin(),
                        all.begin() + std::min<std::ptrdiff_t>(n, std::ssize(all)));
  job.submitted_at = clock_.now();

  if (health_.breaker == Breaker::open) offloaded_while_open_ = true;
  act.tier = tier;
  act.offload = true;
  act.job_id = job.job_id;
  act.energy_j += config_.cost.transfer_energy_j;
  transfer_energy_j_ += config_.cost.transfer_energy_j;
  ++offload_jobs_;

  const std::string id = job.job_id;
  bus_.publish(std::string(topics::kInferenceRequest), std::move(job));
  clock_.schedule_in(config_.offload_timeout_ms, [this, id] { on_timeout(id); });
}

void ProcessingNode::on_response(const InferenceResult& result) {
  if (!active_ || active_->fallback || active_->job_id != result.job_id) return;
  if (result.rejected) {
    fall_back();
    return;
  }
  refresh_health(HealthEvent::response);
  active_->energy_j += result.energy_j;
  decide(result.detections);
}

void ProcessingNode::on_timeout(const std::string& job_id) {
  if (!active_ || active_->fallback || active_->job_id != job_id) return;
  refresh_health(HealthEvent::timeout);
  awaiting_heartbeat_ = true;
  if (config_.ablation.fsm_enabled) fsm_ = force_constrained(fsm_);
  fall_back();
}

void ProcessingNode::fall_back() {
  active_->fallback = true;
  run_local(Tier::nano);
}

void ProcessingNode::on_heartbeat() {
  refresh_health(HealthEvent::heartbeat);
  awaiting_heartbeat_ = false;
}

void ProcessingNode::refresh_health(HealthEvent event) {
  const Breaker before = health_.breaker;
  health_ = health_update(health_, event, clock_.now());
  if (health_.breaker != before) {
    breaker_changes_.push_back({clock_.now(), health_.breaker});
  }
}

void ProcessingNode::decide(const ModelDetections& detections) {
  Active act = std::move(*active_);
  const FrameMessage& frame = act.arrival.frame;

  DecisionRecord r;
  r.frame_id = frame.frame_id;
  r.sequence_id = frame.sequence_id;
  r.status = FrameStatus::decided;
  r.ingest_ms = act.arrival.ingest_ms;
  r.decide_ms = clock_.now();
  r.motion = frame.motion;
  r.fsm_before = act.fsm_before;
  r.fsm_after = fsm_.id;
  r.tier = act.tier;
  r.offload = act.offload;
  r.job_id = act.job_id;
  r.fallback = act.fallback;
  const auto slots = std::min<std::size_t>(detections.size(),
                                           static_cast<std::size_t>(aggregation_.ensemble_size));
  for (std::size_t s = 0; s < slots; ++s) {
    r.model_detection_counts.push_back(static_cast<int>(detections[s].size()));
  }
  r.consensus_boxes = aggregate_models(detections, aggregation_);
  r.image_score = image_score(r.consensus_boxes, aggregation_);
  r.anomalies = act.anomalies;
  r.sensor_boost = act.boost;
  r.combined_score = r.image_score + r.sensor_boost;
  r.label = classify_hazard(r.combined_score, config_.thresholds);
  r.config_fingerprint = fingerprint_;
  r.energy_j = act.energy_j;
  r.latency_ms = r.decide_ms - frame.timestamp;

  // Gate on the previous frame's label so this frame's boost cannot feed
  // back into its own baseline update.
  if (prev_label_) {
    baselines_ = update_baseline(baselines_, frame.sensor, *prev_label_, act.period);
  }
  prev_label_ = r.label;
  prev_combined_ = r.combined_score;
  prev_conflict_ = config_.ablation.fusion_enabled &&
                   sensor_conflict(r.image_score, r.sensor_boost, config_.fsm);

  active_.reset();
  sink_(std::move(r));
  finish_frame();
}

void ProcessingNode::finish_frame() {
  if (!buffered_) return;
  Arrival next = std::move(*buffered_);
  buffered_.reset();
  begin(std::move(next));
}

void ProcessingNode::emit_skipped(const Arrival& arrival, FrameStatus status,
                                  std::string reason) {
  DecisionRecord r;
  r.frame_id = arrival.frame.frame_id;
  r.sequence_id = arrival.frame.sequence_id;
  r.status = status;
  r.reason = std::move(reason);
  r.ingest_ms = arrival.ingest_ms;
  r.decide_ms = clock_.now();
  r.motion = arrival.frame.motion;
  r.fsm_before = fsm_.id;
  r.fsm_after = fsm_.id;
  r.config_fingerprint = fingerprint_;
  r.latency_ms = r.decide_ms - arrival.frame.timestamp;
  sink_(std::move(r));
}

}  // namespace floodsim
