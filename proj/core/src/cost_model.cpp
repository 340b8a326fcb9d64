#include "floodsim/cost_model.hpp"

#include <cmath>

#include "mix.hpp"

namespace floodsim {

void CostModel::validate() const {
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    const TierCost& t = tiers[i];
    if (t.latency_ms < 0 || t.energy_j < 0.0 || t.jitter_ms < 0) {
      throw DomainError("cost model: negative tier figure");
    }
    if (i > 0) {
      if (t.latency_ms <= tiers[i - 1].latency_ms ||
          t.energy_j <= tiers[i - 1].energy_j) {
        throw DomainError("cost model: latency and energy must increase with tier");
      }
    }
  }
  const double scalars[] = {local_latency_scale,      local_energy_scale,
                            worker_latency_scale,     worker_energy_scale,
                            local_extra_model_factor, worker_extra_model_factor,
                            transfer_energy_j,        processing_idle_w,
                            worker_resident_w};
  for (double v : scalars) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("cost model: scale factors must be finite and >= 0");
    }
  }
  if (local_latency_scale <= 0.0 || worker_latency_scale <= 0.0) {
    throw DomainError("cost model: latency scales must be > 0");
  }
  if (message_latency_ms < 0) throw DomainError("cost model: negative message latency");
}

Millis CostModel::inference_latency(Tier tier, Device device, int ensemble_size,
                                    std::uint64_t seed,
                                    std::int64_t frame_id) const {
  const TierCost& t = at(tier);
  const bool local = device == Device::processing;
  const double scale = local ? local_latency_scale : worker_latency_scale;
  const double extra = local ? local_extra_model_factor : worker_extra_model_factor;
  const double models = 1.0 + extra * (ensemble_size - 1);
  const auto base = static_cast<Millis>(
      std::llround(static_cast<double>(t.latency_ms) * scale * models));
  const auto jitter_span =
      static_cast<Millis>(std::llround(static_cast<double>(t.jitter_ms) * scale));
  if (jitter_span <= 0) return base;
  std::uint64_t h = detail::combine(seed, static_cast<std::uint64_t>(frame_id));
  h = detail::combine(h, static_cast<std::uint64_t>(tier));
  h = detail::combine(h, local ? 1U : 2U);
  return base + static_cast<Millis>(h % static_cast<std::uint64_t>(jitter_span + 1));
}

double CostModel::inference_energy(Tier tier, Device device,
                                   int ensemble_size) const {
  const bool local = device == Device::processing;
  const double scale = local ? local_energy_scale : worker_energy_scale;
  const double extra = local ? local_extra_model_factor : worker_extra_model_factor;
  return at(tier).energy_j * scale * (1.0 + extra * (ensemble_size - 1));
}

CostModel CostModel::reference() { return CostModel{}; }

CostModel CostModel::pi_jetson() {
  CostModel m;
  m.name = "pi_jetson";
  m.local_latency_scale = 7.0;
  m.local_energy_scale = 2.0;
  m.worker_latency_scale = 0.5;
  m.worker_energy_scale = 1.0;
  return m;
}

std::optional<CostModel> CostModel::preset(std::string_view name) {
  if (name == "reference" || name == "default") return reference();
  if (name == "pi_jetson") return pi_jetson();
  return std::nullopt;
}

}  // namespace floodsim
