#include "floodsim/simulation.hpp"

#include <sstream>

namespace floodsim {

std::vector<FrameMessage> emitted_frames(const Sequence& seq, SensorVariant variant) {
  const Anomalies shift = injection(variant);
  std::vector<FrameMessage> out;
  out.reserve(seq.frames.size());
  for (const SequenceFrame& sf : seq.frames) {
    FrameMessage f = sf.frame;
    f.sensor.temperature_c += shift.delta_t;
    f.sensor.humidity_pct += shift.delta_rh;
    f.sensor.pressure_hpa += shift.delta_p;
    if (f.sequence_id.empty()) f.sequence_id = seq.id;
    out.push_back(std::move(f));
  }
  return out;
}

RunConfig resolve_for(const Sequence& seq, RunConfig config) {
  config.aggregation.ensemble_size = config.ablation.ensemble_size;
  config.aggregation.image_area = seq.image_area();
  return config;
}

std::string baselines_digest(const DiurnalBaselines& b) {
  std::ostringstream out;
  write_baselines(out, b);
  return sha256_hex(out.str());
}

RunResult run_simulation(const Sequence& seq, const RunConfig& input_config,
                         const DiurnalBaselines& baselines) {
  const RunConfig config = resolve_for(seq, input_config);
  config.validate();
  if (seq.frames.empty()) throw SimulationError("sequence " + seq.id + " has no frames");

  RunResult result;
  result.sequence_id = seq.id;
  result.fingerprint =
      config_fingerprint(config, sequence_digest(seq), baselines_digest(baselines));

  EventQueue clock(config.max_pending_events);
  Bus bus(clock, config.cost.message_latency_ms);

  const std::vector<FrameMessage> frames = emitted_frames(seq, config.variant);
  result.emitted = frames.size();

  std::optional<JetsonNode> jetson;
  if (config.ablation.worker_enabled) {
    jetson.emplace(clock, bus, config.cost, config.seed, config.heartbeat_period_ms);
  }

  bool finished = false;
  auto sink = [&](DecisionRecord r) {
    switch (r.status) {
      case FrameStatus::decided: ++result.decided; break;
      case FrameStatus::dropped: ++result.dropped; break;
      case FrameStatus::rejected: ++result.rejected; break;
    }
    result.records.push_back(std::move(r));
    if (result.records.size() == result.emitted) {
      finished = true;
      result.end_ms = clock.now();
      if (jetson) jetson->stop();
    }
  };

  ProcessingNode processing(clock, bus, config, baselines, seq.start_clock_ms,
                            result.fingerprint, sink);
  GatheringNode gathering(clock, bus);

  if (jetson) jetson->start();
  processing.start();
  gathering.start(frames, seq.frame_interval_ms);
  if (jetson) {
    for (const Outage& o : config.worker_outages) {
      clock.schedule(o.from_ms, [&jetson] { jetson->go_offline(); });
      clock.schedule(o.to_ms, [&jetson] { jetson->go_online(); });
    }
  }

  // Heartbeats keep the queue alive until the last frame is accounted for.
  const Millis horizon =
      static_cast<Millis>(frames.size()) * seq.frame_interval_ms + kMillisPerHour;
  while (clock.step()) {
    if (!finished && clock.now() > horizon) break;
  }
  if (!finished) {
    throw SimulationError("run ended with " +
                          std::to_string(result.emitted - result.records.size()) +
                          " frames unaccounted for");
  }

  result.offload_jobs = processing.offload_jobs();
  result.breaker_changes = processing.breaker_changes();
  result.offloaded_while_open = processing.offloaded_while_open();
  result.max_buffered = processing.max_buffered_observed();
  result.final_baselines = processing.baselines();
  result.trace = bus.trace();

  result.energy.processing_idle_j =
      config.cost.processing_idle_w * static_cast<double>(result.end_ms) / 1000.0;
  result.energy.processing_inference_j = processing.inference_energy_j();
  result.energy.transfer_j = processing.transfer_energy_j();
  if (jetson) {
    result.energy.worker_resident_j = jetson->resident_energy_j();
    result.energy.worker_inference_j = jetson->inference_energy_j();
    result.worker_completed = jetson->completed_jobs();
  }
  return result;
}

}  // namespace floodsim
