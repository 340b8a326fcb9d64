#pragma once

#include <span>
#include <vector>

#include "floodsim/domain.hpp"

namespace floodsim::detail {

// Shared group formulas. Members are summed in ascending index order so that
// two groupings of the same component produce bit-identical boxes.
ConsensusBox merge_group(std::span<const Detection> survivors,
                         std::span<const std::size_t> members);

std::vector<Detection> filter_confident(std::span<const Detection> detections,
                                        double floor);

// Drops groups under the floor and applies the canonical output order.
void finish(std::vector<ConsensusBox>& boxes, double group_floor);

}  // namespace floodsim::detail
