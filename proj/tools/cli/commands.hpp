#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace rmqcal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAcceptance = 1;
inline constexpr int kExitUsage = 2;

struct AggregateArgs {
  std::filesystem::path lists;
  std::optional<std::filesystem::path> weights;
  std::string method = "mc2";
  std::size_t batch = 1;
  double tun1 = 0.05;
  std::size_t tun2 = 5;
  double p = 1.0;
  bool no_truncate = false;
};

struct RunArgs {
  std::filesystem::path config;
  std::optional<std::filesystem::path> output;
  std::optional<std::size_t> jobs;
  bool quiet = false;
};

struct CompareArgs {
  std::filesystem::path dir_a;
  std::filesystem::path dir_b;
  std::optional<std::string> method_a;
  std::optional<std::string> method_b;
  std::string metric = "accuracy";
  double alpha = 0.05;
};

int cmd_aggregate(const AggregateArgs& args, std::ostream& out, std::ostream& err);
int cmd_toy_table2(std::ostream& out, std::ostream& err);
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a command.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rmqcal::cli
