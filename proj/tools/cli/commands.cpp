#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "config.hpp"
#include "rank_io.hpp"
#include "rmqcal/aggregation.hpp"
#include "rmqcal/error.hpp"
#include "runner.hpp"
#include "table2.hpp"

namespace rmqcal::cli {

using nlohmann::json;

int cmd_aggregate(const AggregateArgs& args, std::ostream& out, std::ostream& err) {
  const auto kind = parse_aggregator(args.method);
  if (!kind) {
    err << "error: unknown aggregation method '" << args.method << "'\n";
    return kExitUsage;
  }
  RankTable table;
  std::vector<double> weights;
  try {
    table = read_rank_table(args.lists);
    weights = args.weights ? read_weights(*args.weights) : std::vector<double>(table.lists.size(), 1.0 / static_cast<double>(table.lists.size()));
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (table.recoded) err << "notice: non-competition ranks were re-ranked\n";
  if (weights.size() != table.lists.size()) {
    err << "error: " << weights.size() << " weights for " << table.lists.size() << " lists\n";
    return kExitUsage;
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) {
    err << "error: weights sum to zero\n";
    return kExitUsage;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    err << "notice: weights summed to " << sum << " and were normalized\n";
    for (double& w : weights) w /= sum;
  }

  AggregatorOptions opts;
  opts.p = args.p;
  opts.tun1 = args.tun1;
  opts.tun2 = args.tun2;
  opts.truncate = !args.no_truncate;
  AggregatedRanking agg;
  try {
    agg = aggregate(*kind, table.lists, weights, std::vector<bool>(table.lists.size(), false), args.batch, 0, opts);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  out << "position,sample,score\n";
  for (std::size_t i = 0; i < agg.order.size(); ++i) {
    out << i + 1 << "," << table.sample_ids[agg.order[i]] << "," << std::setprecision(12) << agg.scores[i] << "\n";
  }
  const RankList positions = agg.positions();
  out << "\nlist,kendall,spearman\n";
  RankDistance total;
  for (std::size_t k = 0; k < table.lists.size(); ++k) {
    const RankDistance d{kendall_distance(positions, table.lists[k]), spearman_distance(positions, table.lists[k])};
    total.kendall += d.kendall;
    total.spearman += d.spearman;
    out << table.list_names[k] << "," << d.kendall << "," << d.spearman << "\n";
  }
  out << "total," << total.kendall << "," << total.spearman << "\n";
  if (agg.flagged) err << "notice: truncation fell back to the full pool\n";
  return kExitOk;
}

int cmd_toy_table2(std::ostream& out, std::ostream&) {
  double elapsed = 0.0;
  const auto cols = run_toy(&elapsed);
  out << std::left << std::setw(10) << "sample";
  for (const auto& c : cols) out << std::setw(14) << to_string(c.kind);
  out << "\n";
  for (std::size_t i = 0; i < kToySamples; ++i) {
    out << std::setw(10) << ("Sample" + std::to_string(i + 1));
    for (const auto& c : cols) out << std::setw(14) << c.ranks[i];
    out << "\n";
  }
  out << std::setw(10) << "kendall";
  for (const auto& c : cols) out << std::setw(14) << c.distance.kendall;
  out << "\n" << std::setw(10) << "spearman";
  for (const auto& c : cols) out << std::setw(14) << c.distance.spearman;
  out << "\n\n" << std::right;

  bool all = true;
  for (const auto& check : check_toy(cols, elapsed)) {
    all = all && check.passed;
    out << (check.passed ? "PASS " : "FAIL ") << check.criterion << " " << check.name << ": " << check.detail << "\n";
  }
  return all ? kExitOk : kExitAcceptance;
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  nlohmann::ordered_json raw;
  try {
    cfg = load_config(args.config);
    std::ifstream in(args.config);
    raw = nlohmann::ordered_json::parse(in);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto dir = args.output.value_or(cfg.output);
  try {
    run_experiment(cfg, raw, dir, args.jobs.value_or(cfg.threads), args.quiet ? nullptr : &err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << "wrote " << (dir / "curves.csv").string() << ", " << (dir / "summary.json").string() << " and "
      << cfg.methods.size() * cfg.seeds.size() << " traces\n";
  return kExitOk;
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  std::map<std::string, LearningCurve> a;
  std::map<std::string, LearningCurve> b;
  try {
    a = load_result_dir(args.dir_a, args.metric);
    b = load_result_dir(args.dir_b, args.metric);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<CurvePair> pairs;
  if (args.method_a || args.method_b) {
    const std::string ma = args.method_a.value_or(args.method_b.value_or(""));
    const std::string mb = args.method_b.value_or(ma);
    if (!a.count(ma) || !b.count(mb)) {
      err << "error: method '" << (!a.count(ma) ? ma : mb) << "' not found\n";
      return kExitUsage;
    }
    pairs.push_back({&a.at(ma), &b.at(mb)});
  } else {
    for (const auto& [name, curve] : a) {
      if (b.count(name)) pairs.push_back({&curve, &b.at(name)});
    }
    if (pairs.empty()) {
      for (const auto& [na, ca] : a) {
        for (const auto& [nb, cb] : b) pairs.push_back({&ca, &cb});
      }
    }
  }

  WinTieLossTable table;
  try {
    table = win_tie_loss(pairs, args.alpha);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  out << std::left << std::setw(32) << "pair";
  for (double c : table.checkpoints) out << std::setw(10) << c;
  out << "W/T/L\n";
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out << std::setw(32) << (pairs[p].a->method + " vs " + pairs[p].b->method);
    WinTieLoss row;
    for (Verdict v : table.verdicts[p]) {
      out << std::setw(10) << to_string(v);
      row.win += v == Verdict::win;
      row.tie += v == Verdict::tie;
      row.loss += v == Verdict::loss;
    }
    out << row.format() << "\n";
  }
  out << std::setw(32) << "total";
  for (const auto& w : table.per_checkpoint) out << std::setw(10) << w.format();
  out << table.totals.format() << "\n" << std::right;
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Active learning with multiple query criteria via rank aggregation"};
  app.require_subcommand(1);

  AggregateArgs agg;
  auto* sub_agg = app.add_subcommand("aggregate", "Aggregate rank lists from a CSV file");
  sub_agg->add_option("lists", agg.lists, "Rank-list CSV (sample id, then one rank column per list)")->required();
  sub_agg->add_option("--weights", agg.weights, "One weight per list");
  sub_agg->add_option("--method", agg.method, "borda-min|borda-median|borda-geo|borda-pnorm|bucklin|mc1|mc2|mc3")
      ->capture_default_str();
  sub_agg->add_option("-N,--batch", agg.batch, "Batch size N")->capture_default_str()->check(CLI::PositiveNumber);
  sub_agg->add_option("--tun1", agg.tun1, "Markov smoothing")->capture_default_str();
  sub_agg->add_option("--tun2", agg.tun2, "Truncation margin")->capture_default_str();
  sub_agg->add_option("--p", agg.p, "Borda p-norm exponent")->capture_default_str();
  sub_agg->add_flag("--no-truncate", agg.no_truncate, "Aggregate over all samples");

  auto* sub_toy = app.add_subcommand("toy-table2", "Reproduce the 10-sample toy aggregation example");

  RunArgs run;
  auto* sub_run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  sub_run->add_option("config", run.config, "Experiment config")->required();
  sub_run->add_option("-o,--output", run.output, "Output directory (overrides the config)");
  sub_run->add_option("-j,--jobs", run.jobs, "Concurrent cells")->check(CLI::PositiveNumber);
  sub_run->add_flag("-q,--quiet", run.quiet, "No progress output");

  CompareArgs cmp;
  auto* sub_cmp = app.add_subcommand("compare", "Win/tie/loss table between two result directories");
  sub_cmp->add_option("dir_a", cmp.dir_a)->required();
  sub_cmp->add_option("dir_b", cmp.dir_b)->required();
  sub_cmp->add_option("--method-a", cmp.method_a);
  sub_cmp->add_option("--method-b", cmp.method_b);
  sub_cmp->add_option("--metric", cmp.metric)->check(CLI::IsMember({"accuracy", "f1", "auc"}))->capture_default_str();
  sub_cmp->add_option("--alpha", cmp.alpha)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front()) err << sub->help();
    return kExitUsage;
  }

  if (sub_agg->parsed()) return cmd_aggregate(agg, out, err);
  if (sub_toy->parsed()) return cmd_toy_table2(out, err);
  if (sub_run->parsed()) return cmd_run(run, out, err);
  if (sub_cmp->parsed()) return cmd_compare(cmp, out, err);
  return kExitUsage;
}

}  // namespace rmqcal::cli
