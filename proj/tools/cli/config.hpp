#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmqcal/dataset.hpp"
#include "rmqcal/loop.hpp"

namespace rmqcal::cli {

enum class MethodKind { rmqcal, serial, parallel, random };

std::string_view to_string(MethodKind kind);

struct MethodSpec {
  std::string name;
  MethodKind kind = MethodKind::rmqcal;
  ALConfig config;  // seed, budget, checkpoints and test fraction are filled per run
};

struct DatasetSource {
  std::optional<std::filesystem::path> path;
  TableFormat format = TableFormat::dense_csv;
  std::optional<TwoBlobSpec> synthetic;
  bool normalize = true;
};

struct ExperimentConfig {
  DatasetSource dataset;
  double test_fraction = 0.5;
  std::vector<std::uint64_t> seeds;
  std::vector<double> checkpoints = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  double budget = 0.3;
  double alpha = 0.05;
  std::vector<MethodSpec> methods;
  std::filesystem::path output = "results";
  std::size_t threads = 1;

  /// The method's ALConfig completed with the shared run settings.
  ALConfig run_config(const MethodSpec& method, std::uint64_t seed) const;
};

/// Raised with every offending key when a config does not match the schema.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

private:
  std::vector<std::string> problems_;
};

/// Relative dataset paths are resolved against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

Dataset load_dataset(const DatasetSource& source);

}  // namespace rmqcal::cli
