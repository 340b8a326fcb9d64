// Canonical decision log lines, run artifacts and replay verification.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floodsim/decision_record.hpp"
#include "floodsim/metrics.hpp"
#include "floodsim/scenario.hpp"
#include "floodsim/sequence.hpp"
#include "floodsim/simulation.hpp"

namespace floodsim {

class ProvenanceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// One JSON line, newline-terminated, keys in a fixed order, numbers in
/// shortest round-trip form. `job_id` is the only key ever omitted.
/// Throws ProvenanceError unless combined_score == image_score + sensor_boost.
std::string write_record(const DecisionRecord& r);
DecisionRecord parse_record(std::string_view line);

std::string write_records(const std::vector<DecisionRecord>& records);

/// What a run needs from storage/data/.
struct RunInputs {
  std::filesystem::path sequence_path;
  std::optional<std::filesystem::path> baselines_path;  // none: unseeded
  RunConfig config;
};

/// Thrown when an input file is absent or unreadable.
class MissingInputError : public ProvenanceError {
 public:
  using ProvenanceError::ProvenanceError;
};

struct LoadedInputs {
  Sequence sequence;
  DiurnalBaselines baselines;
};

LoadedInputs load_inputs(const RunInputs& inputs);

struct RunArtifact {
  std::filesystem::path dir;
  RunResult result;
  RunMetrics metrics;
};

/// Runs the scenario and writes storage/data_results/<run-id>/ with
/// config.json, decisions.jsonl, metrics.json and invocation.json.
RunArtifact execute_run(const RunInputs& inputs, const std::filesystem::path& results_root,
                        std::string_view invocation_json = "{}",
                        const MetricsOptions& options = {});

/// Writes the artifact files for an already computed run.
void write_artifact(const std::filesystem::path& dir, const RunInputs& inputs,
                    const LoadedInputs& loaded, const RunResult& result,
                    const RunMetrics& metrics, std::string_view invocation_json);

/// Reads config.json of a run directory back into inputs.
RunInputs read_run_inputs(const std::filesystem::path& run_dir);

enum class ReplayStatus { identical, divergent, missing_input };

std::string_view to_string(ReplayStatus s);

struct ReplayVerdict {
  ReplayStatus status = ReplayStatus::identical;
  std::optional<std::size_t> line;          // 1-based first differing line
  std::optional<std::int64_t> frame_id;     // frame of that line, when known
  std::string detail;
};

/// Byte comparison of two decision logs.
ReplayVerdict compare_logs(std::string_view stored, std::string_view regenerated);

/// Re-executes the run stored in `run_dir` and compares decisions.jsonl.
ReplayVerdict replay(const std::filesystem::path& run_dir);

}  // namespace floodsim
