#include <algorithm>
#include <vector>

#include "consensus_detail.hpp"
#include "floodsim/consensus.hpp"

namespace floodsim {

std::vector<ConsensusBox> brute_force_aggregate(
    std::span<const Detection> detections, const AggregationParams& params) {
  if (detections.size() > kBruteForceLimit) {
    throw DomainError("brute_force_aggregate accepts at most 12 detections");
  }
  const std::vector<Detection> survivors =
      detail::filter_confident(detections, params.confidence_floor);
  const std::size_t n = survivors.size();

  // Full adjacency matrix, no early exits.
  std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      adjacent[i][j] =
          i == j || iou(survivors[i].box, survivors[j].box) >= params.iou_threshold;
    }
  }

  std::vector<int> component(n, -1);
  int next = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (component[seed] >= 0) continue;
    std::vector<std::size_t> stack{seed};
    component[seed] = next;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        if (adjacent[v][w] && component[w] < 0) {
          component[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }

  std::vector<ConsensusBox> boxes;
  for (int c = 0; c < next; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (component[i] == c) members.push_back(i);
    }
    boxes.push_back(detail::merge_group(survivors, members));
  }
  detail::finish(boxes, params.group_confidence_floor);
  return boxes;
}

}  // namespace floodsim
