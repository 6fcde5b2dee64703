#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "rmqcal/error.hpp"

namespace rmqcal::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

std::string trace_csv(const RunTrace& trace, const Dataset& data) {
  std::ostringstream os;
  os << "t,n_labeled,selected";
  for (const auto& c : trace.criteria) os << ",w_" << c;
  os << "\n";
  for (const auto& it : trace.iterations) {
    os << it.t << "," << it.n_labeled << ",";
    for (std::size_t i = 0; i < it.selected.size(); ++i) os << (i ? " " : "") << data.ids[it.selected[i]];
    for (std::size_t k = 0; k < trace.criteria.size(); ++k) {
      os << "," << (k < it.weights.size() ? fmt(it.weights[k]) : "");
    }
    os << "\n";
  }
  return os.str();
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

RunTrace run_method(const Problem& problem, MethodKind kind, const ALConfig& cfg) {
  switch (kind) {
    case MethodKind::rmqcal: return run_rmqcal(problem, cfg);
    case MethodKind::serial: return run_serial(problem, cfg);
    case MethodKind::parallel: return run_parallel(problem, cfg);
    case MethodKind::random: return run_random(problem, cfg);
  }
  throw PreconditionError("unknown method kind");
}

void write_curves(const std::vector<CurveRow>& rows, std::ostream& out) {
  out << "method,seed,fraction,n_labeled,accuracy,f1,auc\n";
  for (const auto& r : rows) {
    out << r.method << "," << r.seed << "," << fmt(r.record.fraction) << "," << r.record.n_labeled << ","
        << fmt(r.record.accuracy) << "," << fmt(r.record.f1) << "," << fmt(r.record.auc) << "\n";
  }
}

std::vector<CurveRow> read_curves(std::istream& in) {
  std::vector<CurveRow> rows;
  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line) || line.rfind("method,seed,fraction", 0) != 0) {
    throw ParseError("curves: missing header", row);
  }
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 7) throw ParseError("curves: expected 7 columns", row);
    try {
      CurveRow r;
      r.method = cells[0];
      r.seed = std::stoull(cells[1]);
      r.record.fraction = std::stod(cells[2]);
      r.record.n_labeled = std::stoull(cells[3]);
      r.record.accuracy = std::stod(cells[4]);
      r.record.f1 = std::stod(cells[5]);
      r.record.auc = std::stod(cells[6]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("curves: malformed number", row);
    }
  }
  return rows;
}

std::map<std::string, LearningCurve> curves_by_method(const std::vector<CurveRow>& rows, const std::string& metric) {
  std::map<std::string, std::map<std::uint64_t, std::map<double, double>>> grid;
  for (const auto& r : rows) {
    double v = 0.0;
    if (metric == "accuracy") {
      v = r.record.accuracy;
    } else if (metric == "f1") {
      v = r.record.f1;
    } else if (metric == "auc") {
      v = r.record.auc;
    } else {
      throw PreconditionError("unknown metric '" + metric + "'");
    }
    if (!grid[r.method][r.seed].emplace(r.record.fraction, v).second) {
      throw PreconditionError("duplicate curve entry for " + r.method);
    }
  }
  std::map<std::string, LearningCurve> out;
  for (const auto& [method, seeds] : grid) {
    LearningCurve c;
    c.method = method;
    for (const auto& [seed, points] : seeds) {
      std::vector<double> fractions;
      std::vector<double> values;
      for (const auto& [f, v] : points) {
        fractions.push_back(f);
        values.push_back(v);
      }
      if (c.seeds.empty()) {
        c.checkpoints = fractions;
      } else if (fractions != c.checkpoints) {
        throw PreconditionError("method " + method + ": seeds disagree on the checkpoint grid");
      }
      c.seeds.push_back(seed);
      c.values.push_back(std::move(values));
    }
    c.validate();
    out.emplace(method, std::move(c));
  }
  return out;
}

std::map<std::string, LearningCurve> load_result_dir(const std::filesystem::path& dir, const std::string& metric) {
  const auto file = dir / "curves.csv";
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  auto rows = read_curves(in);
  if (rows.empty()) throw ParseError(file.string() + ": no curve rows");
  return curves_by_method(rows, metric);
}

ordered_json summarize(const std::map<std::string, LearningCurve>& accuracy, const std::map<std::string, LearningCurve>& f1,
               const std::map<std::string, LearningCurve>& auc, const std::vector<std::string>& method_order,
               double alpha) {
  ordered_json out;
  const LearningCurve& first = accuracy.at(method_order.front());
  out["metadata"] = {{"test", "paired t-test"},
                     {"sided", "two-sided"},
                     {"alpha", alpha},
                     {"verdict_metric", "accuracy"},
                     {"checkpoints", first.checkpoints},
                     {"seeds", first.seeds},
                     {"methods", method_order}};

  ordered_json methods = ordered_json::object();
  for (const auto& name : method_order) {
    ordered_json m;
    for (const auto& [metric, curves] :
         {std::pair{"accuracy", &accuracy}, std::pair{"f1", &f1}, std::pair{"auc", &auc}}) {
      const LearningCurve& c = curves->at(name);
      ordered_json means = ordered_json::array();
      ordered_json sds = ordered_json::array();
      for (std::size_t k = 0; k < c.checkpoints.size(); ++k) {
        const auto col = c.column(k);
        means.push_back(number_or_null(mean_of(col)));
        sds.push_back(number_or_null(sd_of(col)));
      }
      m[metric] = {{"mean", means}, {"sd", sds}};
    }
    methods[name] = m;
  }
  out["methods"] = methods;

  ordered_json matrix = ordered_json::array();
  ordered_json totals = ordered_json::object();
  for (const auto& a : method_order) {
    WinTieLoss total;
    for (const auto& b : method_order) {
      if (a == b) continue;
      const CurvePair pair{&accuracy.at(a), &accuracy.at(b)};
      const WinTieLossTable t = win_tie_loss(std::span<const CurvePair>(&pair, 1), alpha);
      ordered_json verdicts = ordered_json::array();
      for (Verdict v : t.verdicts.front()) verdicts.push_back(std::string(to_string(v)));
      matrix.push_back({{"a", a}, {"b", b}, {"verdicts", verdicts}, {"wtl", t.totals.format()}});
      total += t.totals;
    }
    totals[a] = total.format();
  }
  out["verdicts"] = matrix;
  out["totals"] = totals;
  return out;
}

void run_experiment(const ExperimentConfig& cfg, const nlohmann::ordered_json& raw_config, const std::filesystem::path& out_dir,
                    std::size_t threads, std::ostream* log) {
  const Dataset data = load_dataset(cfg.dataset);
  std::filesystem::create_directories(out_dir / "traces");

  struct Cell {
    std::size_t method;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (auto seed : cfg.seeds) cells.push_back({m, seed});
  }
  std::vector<std::vector<CheckpointRecord>> results(cells.size());
  std::vector<std::string> errors(cells.size());
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const MethodSpec& method = cfg.methods[cells[i].method];
      try {
        const Problem problem = make_problem(data, cfg.test_fraction, cells[i].seed);
        const RunTrace trace = run_method(problem, method.kind, cfg.run_config(method, cells[i].seed));
        write_atomic(out_dir / "traces" / (method.name + "_seed" + std::to_string(cells[i].seed) + ".csv"),
                     trace_csv(trace, data));
        results[i] = trace.checkpoints;
        if (log) {
          std::lock_guard lock(log_mutex);
          *log << method.name << " seed " << cells[i].seed << ": " << trace.iterations.size() << " iterations\n";
          for (const auto& w : trace.warnings) *log << "  warning: " << w << "\n";
        }
      } catch (const std::exception& e) {
        errors[i] = method.name + " seed " + std::to_string(cells[i].seed) + ": " + e.what();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(threads, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }

  std::vector<CurveRow> rows;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const auto& rec : results[i]) rows.push_back({cfg.methods[cells[i].method].name, cells[i].seed, rec});
  }
  std::ostringstream curves;
  write_curves(rows, curves);
  write_atomic(out_dir / "curves.csv", curves.str());

  std::vector<std::string> order;
  for (const auto& m : cfg.methods) order.push_back(m.name);
  const ordered_json summary = summarize(curves_by_method(rows, "accuracy"), curves_by_method(rows, "f1"),
                                 curves_by_method(rows, "auc"), order, cfg.alpha);
  write_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
  write_atomic(out_dir / "config.json", raw_config.dump(2) + "\n");
}

}  // namespace rmqcal::cli
