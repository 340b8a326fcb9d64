// Parameterised latency and energy model standing in for hardware
// measurements.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "floodsim/domain.hpp"

namespace floodsim {

enum class Device { processing, worker };

struct TierCost {
  Millis latency_ms = 0;
  double energy_j = 0.0;
  Millis jitter_ms = 0;

  friend bool operator==(const TierCost&, const TierCost&) = default;
};

struct CostModel {
  std::string name = "reference";
  std::array<TierCost, 4> tiers{{
      {120, 0.35, 6},
      {300, 0.9, 15},
      {650, 2.0, 32},
      {1200, 3.8, 60},
  }};
  // Device scaling of the per-tier base figures.
  double local_latency_scale = 1.0;
  double local_energy_scale = 1.0;
  double worker_latency_scale = 1.0;
  double worker_energy_scale = 1.0;
  // Added cost per extra ensemble model: the CPU runs models back to back,
  // the GPU batches them.
  double local_extra_model_factor = 1.0;
  double worker_extra_model_factor = 0.25;
  Millis message_latency_ms = 20;
  double transfer_energy_j = 0.15;  // per offload round trip
  double processing_idle_w = 2.2;
  double worker_resident_w = 1.0;   // only while a job is resident

  const TierCost& at(Tier t) const { return tiers[static_cast<int>(t)]; }

  /// Throws DomainError unless latency and energy strictly increase with
  /// tier and every figure is non-negative.
  void validate() const;

  /// Modeled inference time including the deterministic jitter for
  /// (seed, frame, tier, device).
  Millis inference_latency(Tier tier, Device device, int ensemble_size,
                           std::uint64_t seed, std::int64_t frame_id) const;
  double inference_energy(Tier tier, Device device, int ensemble_size) const;

  /// Default desk-scale figures.
  static CostModel reference();
  /// Raspberry-Pi CPU + Jetson GPU shape: local inference is several times
  /// slower than a round trip to the worker.
  static CostModel pi_jetson();
  static std::optional<CostModel> preset(std::string_view name);

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

}  // namespace floodsim
