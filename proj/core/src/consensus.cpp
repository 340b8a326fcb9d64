#include "floodsim/consensus.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "consensus_detail.hpp"

namespace floodsim {

void AggregationParams::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(confidence_floor) || !in_unit(iou_threshold) ||
      !in_unit(group_confidence_floor)) {
    throw DomainError("aggregation floors must lie in [0,1]");
  }
  if (ensemble_size < 1) throw DomainError("ensemble_size must be >= 1");
  if (!(image_area > 0.0)) throw DomainError("image_area must be > 0");
}

namespace detail {

ConsensusBox merge_group(std::span<const Detection> survivors,
                         std::span<const std::size_t> members) {
  double c = 0.0, x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  std::set<int> models;
  for (std::size_t i : members) {
    const Detection& d = survivors[i];
    c += d.confidence;
    x0 += d.confidence * d.box.x_min;
    y0 += d.confidence * d.box.y_min;
    x1 += d.confidence * d.box.x_max;
    y1 += d.confidence * d.box.y_max;
    models.insert(d.model_id);
  }
  ConsensusBox out;
  out.summed_confidence = c;
  out.agreement = static_cast<int>(models.size());
  if (c > 0.0) {
    out.box = BoundingBox{x0 / c, y0 / c, x1 / c, y1 / c};
  } else {
    // All-zero confidences only survive a zero floor; fall back to the
    // unweighted mean so the box stays inside the group's hull.
    const double n = static_cast<double>(members.size());
    BoundingBox mean{};
    for (std::size_t i : members) {
      mean.x_min += survivors[i].box.x_min / n;
      mean.y_min += survivors[i].box.y_min / n;
      mean.x_max += survivors[i].box.x_max / n;
      mean.y_max += survivors[i].box.y_max / n;
    }
    out.box = mean;
  }
  return out;
}

std::vector<Detection> filter_confident(std::span<const Detection> detections,
                                        double floor) {
  std::vector<Detection> out;
  out.reserve(detections.size());
  for (const Detection& d : detections) {
    if (d.confidence >= floor) out.push_back(d);
  }
  return out;
}

void finish(std::vector<ConsensusBox>& boxes, double group_floor) {
  std::erase_if(boxes, [group_floor](const ConsensusBox& b) {
    return b.summed_confidence < group_floor;
  });
  std::sort(boxes.begin(), boxes.end(),
            [](const ConsensusBox& a, const ConsensusBox& b) {
              if (a.summed_confidence != b.summed_confidence) {
                return a.summed_confidence > b.summed_confidence;
              }
              if (a.box.x_min != b.box.x_min) return a.box.x_min < b.box.x_min;
              if (a.box.y_min != b.box.y_min) return a.box.y_min < b.box.y_min;
              if (a.box.x_max != b.box.x_max) return a.box.x_max < b.box.x_max;
              if (a.box.y_max != b.box.y_max) return a.box.y_max < b.box.y_max;
              return a.agreement < b.agreement;
            });
}

}  // namespace detail

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // The smaller index becomes the root so group order follows input order.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<ConsensusBox> aggregate(std::span<const Detection> detections,
                                    const AggregationParams& params) {
  const std::vector<Detection> survivors =
      detail::filter_confident(detections, params.confidence_floor);
  const std::size_t n = survivors.size();

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sets.find(i) == sets.find(j)) continue;
      if (iou(survivors[i].box, survivors[j].box) >= params.iou_threshold) {
        sets.unite(i, j);
      }
    }
  }

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of_root(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (group_of_root[root] == n) {
      group_of_root[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of_root[root]].push_back(i);
  }

  std::vector<ConsensusBox> boxes;
  boxes.reserve(groups.size());
  for (const auto& members : groups) {
    boxes.push_back(detail::merge_group(survivors, members));
  }
  detail::finish(boxes, params.group_confidence_floor);
  return boxes;
}

std::vector<ConsensusBox> aggregate_models(const ModelDetections& per_model,
                                           const AggregationParams& params) {
  std::vector<Detection> flat;
  const std::size_t slots =
      std::min(per_model.size(), static_cast<std::size_t>(params.ensemble_size));
  for (std::size_t s = 0; s < slots; ++s) {
    flat.insert(flat.end(), per_model[s].begin(), per_model[s].end());
  }
  return aggregate(flat, params);
}

double box_score(const ConsensusBox& box, const AggregationParams& params) {
  const double area_fraction = box.box.area() / params.image_area;
  const double bonus = 1.0 + params.agreement_bonus * (box.agreement - 1);
  const double normalisation = 3.0 / params.ensemble_size;
  return box.summed_confidence * area_fraction * bonus * normalisation;
}

double image_score(std::span<const ConsensusBox> boxes,
                   const AggregationParams& params) {
  double total = 0.0;
  for (const ConsensusBox& b : boxes) total += box_score(b, params);
  return total;
}

}  // namespace floodsim
