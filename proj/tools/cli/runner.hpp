#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "rmqcal/eval.hpp"
#include "rmqcal/loop.hpp"

namespace rmqcal::cli {

struct CurveRow {
  std::string method;
  std::uint64_t seed = 0;
  CheckpointRecord record;
};

RunTrace run_method(const Problem& problem, MethodKind kind, const ALConfig& cfg);

/// Runs every (method, seed) cell and writes traces/, curves.csv,
/// summary.json and config.json under `out_dir`. `threads` > 1 runs cells
/// concurrently; results do not depend on it.
void run_experiment(const ExperimentConfig& cfg, const nlohmann::ordered_json& raw_config, const std::filesystem::path& out_dir,
                    std::size_t threads, std::ostream* log = nullptr);

void write_curves(const std::vector<CurveRow>& rows, std::ostream& out);
std::vector<CurveRow> read_curves(std::istream& in);

/// method -> curve of `metric` ("accuracy", "f1" or "auc").
std::map<std::string, LearningCurve> curves_by_method(const std::vector<CurveRow>& rows, const std::string& metric);

/// Loads curves.csv from a result directory; throws ParseError if missing or malformed.
std::map<std::string, LearningCurve> load_result_dir(const std::filesystem::path& dir, const std::string& metric);

nlohmann::ordered_json summarize(const std::map<std::string, LearningCurve>& accuracy,
                         const std::map<std::string, LearningCurve>& f1, const std::map<std::string, LearningCurve>& auc,
                         const std::vector<std::string>& method_order, double alpha);

/// Writes `text` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace rmqcal::cli
