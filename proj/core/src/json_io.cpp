#include "json_io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "floodsim/sequence.hpp"

namespace floodsim::jsonio {

Json box_to_json(const BoundingBox& b) {
  return Json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

BoundingBox box_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw DomainError("box must be [x0, y0, x1, y1]");
  for (const auto& v : j) {
    if (!v.is_number()) throw DomainError("box coordinates must be numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

Json detection_to_json(const Detection& d) {
  Json j;
  j["box"] = box_to_json(d.box);
  j["confidence"] = d.confidence;
  j["model_id"] = d.model_id;
  return j;
}

Detection detection_from_json(const Json& j) {
  Detection d;
  d.box = box_from_json(field(j, "box"));
  d.confidence = number(j, "confidence");
  d.model_id = static_cast<int>(integer(j, "model_id"));
  return d;
}

Json model_detections_to_json(const ModelDetections& m) {
  Json out = Json::array();
  for (const auto& list : m) {
    Json l = Json::array();
    for (const auto& d : list) l.push_back(detection_to_json(d));
    out.push_back(std::move(l));
  }
  return out;
}

ModelDetections model_detections_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("detections must be a list per model");
  ModelDetections out;
  for (const auto& list : j) {
    if (!list.is_array()) throw DomainError("detections must be a list per model");
    auto& slot = out.emplace_back();
    for (const auto& d : list) slot.push_back(detection_from_json(d));
  }
  return out;
}

Json consensus_to_json(const ConsensusBox& c) {
  Json j;
  j["box"] = box_to_json(c.box);
  j["summed_confidence"] = c.summed_confidence;
  j["agreement"] = c.agreement;
  return j;
}

ConsensusBox consensus_from_json(const Json& j) {
  ConsensusBox c;
  c.box = box_from_json(field(j, "box"));
  c.summed_confidence = number(j, "summed_confidence");
  c.agreement = static_cast<int>(integer(j, "agreement"));
  return c;
}

const Json& field(const Json& j, std::string_view key) {
  if (!j.is_object()) throw DomainError("expected an object around '" + std::string(key) + "'");
  auto it = j.find(std::string(key));
  if (it == j.end()) throw DomainError("missing field '" + std::string(key) + "'");
  return *it;
}

double number(const Json& j, std::string_view key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw DomainError("field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const Json& j, std::string_view key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) {
    throw DomainError("field '" + std::string(key) + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string text(const Json& j, std::string_view key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw DomainError("field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

bool flag(const Json& j, std::string_view key) {
  const Json& v = field(j, key);
  if (!v.is_boolean()) throw DomainError("field '" + std::string(key) + "' must be a boolean");
  return v.get<bool>();
}

Json parse(std::string_view input, std::string_view what) {
  try {
    return Json::parse(input);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string(what) + ": " + e.what());
  }
}

}  // namespace floodsim::jsonio

namespace floodsim {

using jsonio::Json;

namespace {

Json frame_to_json(const SequenceFrame& sf, const std::string& seq_id) {
  const FrameMessage& f = sf.frame;
  Json j;
  j["frame_id"] = f.frame_id;
  if (f.sequence_id != seq_id) j["sequence_id"] = f.sequence_id;
  j["motion"] = std::string(to_string(f.motion));
  j["truth"] = static_cast<int>(sf.truth);
  j["sensor"] = Json{{"temperature_c", f.sensor.temperature_c},
                     {"humidity_pct", f.sensor.humidity_pct},
                     {"pressure_hpa", f.sensor.pressure_hpa}};
  Json tiers = Json::object();
  for (const auto& [tier, dets] : f.detections_by_tier) {
    tiers[std::string(to_string(tier))] = jsonio::model_detections_to_json(dets);
  }
  j["detections"] = std::move(tiers);
  return j;
}

SequenceFrame frame_from_json(const Json& j, const std::string& seq_id) {
  SequenceFrame sf;
  FrameMessage& f = sf.frame;
  f.frame_id = jsonio::integer(j, "frame_id");
  f.sequence_id = j.contains("sequence_id") ? jsonio::text(j, "sequence_id") : seq_id;
  const auto motion = parse_motion(jsonio::text(j, "motion"));
  if (!motion) throw DomainError("unknown motion cue");
  f.motion = *motion;
  const auto truth = jsonio::integer(j, "truth");
  if (truth < 0 || truth > 2) throw DomainError("truth must be 0, 1 or 2");
  sf.truth = static_cast<HazardLabel>(truth);
  const Json& s = jsonio::field(j, "sensor");
  f.sensor.temperature_c = jsonio::number(s, "temperature_c");
  f.sensor.humidity_pct = jsonio::number(s, "humidity_pct");
  f.sensor.pressure_hpa = jsonio::number(s, "pressure_hpa");
  const Json& tiers = jsonio::field(j, "detections");
  if (!tiers.is_object()) throw DomainError("detections must map tier names to lists");
  for (const auto& [name, dets] : tiers.items()) {
    const auto tier = parse_tier(name);
    if (!tier) throw DomainError("unknown tier '" + name + "'");
    f.detections_by_tier[*tier] = jsonio::model_detections_from_json(dets);
  }
  return sf;
}

}  // namespace

void write_sequence(std::ostream& out, const Sequence& seq) {
  Json header;
  header["sequence"] = seq.id;
  header["motion"] = std::string(to_string(seq.motion));
  header["frame_interval_ms"] = seq.frame_interval_ms;
  header["start_clock_ms"] = seq.start_clock_ms;
  header["image_width"] = seq.image_width;
  header["image_height"] = seq.image_height;
  header["frames"] = seq.frames.size();
  out << header.dump() << '\n';
  for (const auto& sf : seq.frames) out << frame_to_json(sf, seq.id).dump() << '\n';
}

Sequence read_sequence(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next()) throw DomainError("sequence: empty input");
  Sequence seq;
  std::size_t declared = 0;
  try {
    const Json h = jsonio::parse(line, "sequence header");
    seq.id = jsonio::text(h, "sequence");
    const auto motion = parse_motion(jsonio::text(h, "motion"));
    if (!motion) throw DomainError("unknown motion cue");
    seq.motion = *motion;
    seq.frame_interval_ms = jsonio::integer(h, "frame_interval_ms");
    seq.start_clock_ms = jsonio::integer(h, "start_clock_ms");
    seq.image_width = jsonio::number(h, "image_width");
    seq.image_height = jsonio::number(h, "image_height");
    declared = static_cast<std::size_t>(jsonio::integer(h, "frames"));
    while (next()) {
      seq.frames.push_back(frame_from_json(jsonio::parse(line, "sequence frame"), seq.id));
    }
  } catch (const DomainError& e) {
    throw DomainError("sequence line " + std::to_string(line_no) + ": " + e.what());
  }
  if (seq.frames.size() != declared) {
    throw DomainError("sequence: header declares " + std::to_string(declared) +
                      " frames, found " + std::to_string(seq.frames.size()));
  }
  if (seq.frame_interval_ms <= 0) throw DomainError("sequence: frame_interval_ms must be > 0");
  return seq;
}

void save_sequence(const std::filesystem::path& path, const Sequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  write_sequence(out, seq);
}

Sequence load_sequence(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  return read_sequence(in);
}

std::string sequence_digest(const Sequence& seq) {
  std::ostringstream out;
  write_sequence(out, seq);
  return sha256_hex(out.str());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace floodsim
