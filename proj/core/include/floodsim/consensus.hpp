// Multi-model detection aggregation and the image score.
#pragma once

#include <span>
#include <vector>

#include "floodsim/domain.hpp"

namespace floodsim {

struct AggregationParams {
  double confidence_floor = 0.015;
  double iou_threshold = 0.5;
  double group_confidence_floor = 0.10;
  double agreement_bonus = 0.2;
  int ensemble_size = 3;
  double image_area = 640.0 * 480.0;

  /// Throws DomainError when a field is out of its domain.
  void validate() const;
};

/// Two-step aggregation:
///  1. drop detections below `confidence_floor`;
///  2. single-link grouping of the survivors over the IoU >= threshold graph;
///  3. per group: C = sum(conf), box = sum(conf * box) / C, M = distinct models;
///  4. drop groups with C < `group_confidence_floor`.
/// Output is sorted by descending C, then ascending x_min, then y_min.
std::vector<ConsensusBox> aggregate(std::span<const Detection> detections,
                                    const AggregationParams& params);

/// Flattens per-model lists (slot order, then list order) for the first
/// `ensemble_size` models and aggregates them.
std::vector<ConsensusBox> aggregate_models(const ModelDetections& per_model,
                                           const AggregationParams& params);

/// Per-box score C * area/A_img * (1 + bonus*(M-1)) * 3/N.
double box_score(const ConsensusBox& box, const AggregationParams& params);

/// Sum of box scores; 0 for no boxes.
double image_score(std::span<const ConsensusBox> boxes,
                   const AggregationParams& params);

/// Exhaustive reference for `aggregate`: connected components of the full
/// pairwise IoU graph by depth-first search. Accepts at most
/// `kBruteForceLimit` detections and throws DomainError beyond that.
inline constexpr std::size_t kBruteForceLimit = 12;
std::vector<ConsensusBox> brute_force_aggregate(
    std::span<const Detection> detections, const AggregationParams& params);

}  // namespace floodsim
