// Seed-deterministic synthetic sequences standing in for the recorded
// field sequences.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "floodsim/fusion.hpp"
#include "floodsim/sequence.hpp"

namespace floodsim {

/// slow_creeping, fast_passing, stopped_water, stopped_water_2, slow_no_water.
const std::vector<std::string>& sequence_ids();

/// Throws DomainError for an unknown id.
Sequence generate_sequence(std::string_view id, std::uint64_t seed);
std::vector<Sequence> generate_sequences(std::uint64_t seed);

/// Per-period climate the generated readings fluctuate around.
DiurnalBaselines climate_baselines();

struct Dataset {
  std::vector<std::filesystem::path> sequences;
  std::filesystem::path baselines;
  std::vector<std::filesystem::path> scenarios;
};

/// Writes sequences/<id>.jsonl, baselines.txt and scenarios/<id>.json
/// (production configuration) under `data_dir`.
Dataset write_dataset(const std::filesystem::path& data_dir, std::uint64_t seed);

}  // namespace floodsim
