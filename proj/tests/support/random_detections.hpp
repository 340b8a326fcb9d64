#pragma once

#include <random>
#include <vector>

#include "floodsim/consensus.hpp"

namespace floodsim::testing {

/// Up to `max_boxes` detections clustered around a few centres so that
/// overlapping groups, chains and isolated boxes all occur.
inline std::vector<Detection> random_detections(std::mt19937_64& rng,
                                                std::size_t max_boxes = 12) {
  std::uniform_int_distribution<std::size_t> count(0, max_boxes);
  std::uniform_int_distribution<int> centres(1, 4);
  std::uniform_int_distribution<int> model(1, kMaxEnsembleSize);
  std::uniform_real_distribution<double> pos(0.0, 560.0);
  std::uniform_real_distribution<double> jitter(-25.0, 25.0);
  std::uniform_real_distribution<double> size(20.0, 120.0);
  std::uniform_real_distribution<double> conf(0.0, 1.0);

  std::vector<std::pair<double, double>> anchors(static_cast<std::size_t>(centres(rng)));
  for (auto& a : anchors) a = {pos(rng), pos(rng) * 0.8};
  std::uniform_int_distribution<std::size_t> pick(0, anchors.size() - 1);

  std::vector<Detection> out(count(rng));
  for (Detection& d : out) {
    const auto& [cx, cy] = anchors[pick(rng)];
    const double x0 = cx + jitter(rng);
    const double y0 = cy + jitter(rng);
    d.box = {x0, y0, x0 + size(rng), y0 + size(rng)};
    d.confidence = conf(rng);
    d.model_id = model(rng);
  }
  return out;
}

/// Image score evaluated term by term from the definition.
inline double direct_image_score(const std::vector<ConsensusBox>& boxes,
                                 const AggregationParams& p) {
  double s = 0.0;
  for (const ConsensusBox& b : boxes) {
    s += b.summed_confidence * (b.box.area() / p.image_area) *
         (1.0 + p.agreement_bonus * (b.agreement - 1)) *
         (static_cast<double>(kMaxEnsembleSize) / p.ensemble_size);
  }
  return s;
}

}  // namespace floodsim::testing
