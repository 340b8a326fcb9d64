#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "floodsim/domain.hpp"

namespace floodsim::jsonio {

using Json = nlohmann::ordered_json;

Json box_to_json(const BoundingBox& b);
BoundingBox box_from_json(const Json& j);

Json detection_to_json(const Detection& d);
Detection detection_from_json(const Json& j);

Json model_detections_to_json(const ModelDetections& m);
ModelDetections model_detections_from_json(const Json& j);

Json consensus_to_json(const ConsensusBox& c);
ConsensusBox consensus_from_json(const Json& j);

// Field access that reports the missing or mistyped key.
const Json& field(const Json& j, std::string_view key);
double number(const Json& j, std::string_view key);
std::int64_t integer(const Json& j, std::string_view key);
std::string text(const Json& j, std::string_view key);
bool flag(const Json& j, std::string_view key);

Json parse(std::string_view text, std::string_view what);

}  // namespace floodsim::jsonio
