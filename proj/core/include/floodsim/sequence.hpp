// Recorded (or synthetic) frame sequences with per-frame ground truth.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "floodsim/domain.hpp"

namespace floodsim {

struct SequenceFrame {
  FrameMessage frame;  // timestamp is assigned on emission
  HazardLabel truth = HazardLabel::no_flood;

  friend bool operator==(const SequenceFrame&, const SequenceFrame&) = default;
};

struct Sequence {
  std::string id;
  MotionCue motion = MotionCue::slow;  // nominal label of the whole sequence
  Millis frame_interval_ms = 1000;
  Millis start_clock_ms = 12 * 3'600'000;  // clock time of the first frame
  double image_width = 640.0;
  double image_height = 480.0;
  std::vector<SequenceFrame> frames;

  double image_area() const { return image_width * image_height; }

  friend bool operator==(const Sequence&, const Sequence&) = default;
};

/// JSON lines: a header object followed by one object per frame.
void write_sequence(std::ostream& out, const Sequence& seq);
Sequence read_sequence(std::istream& in);
void save_sequence(const std::filesystem::path& path, const Sequence& seq);
Sequence load_sequence(const std::filesystem::path& path);

/// Hex SHA-256 over the serialized sequence.
std::string sequence_digest(const Sequence& seq);

/// Hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace floodsim
