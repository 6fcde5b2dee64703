#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "rmqcal/error.hpp"

namespace rmqcal::cli {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid config:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

// Collects schema problems instead of stopping at the first one.
class Reader {
public:
  std::vector<std::string> problems;

  void unknown_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) problems.push_back(where + key + ": unknown key");
    }
  }

  bool object(const json& obj, const std::string& key) {
    if (!obj.is_object()) {
      problems.push_back(key + ": expected an object");
      return false;
    }
    return true;
  }

  template <class T>
  bool value(const json& v, const std::string& path, T& out, double lo, double hi, bool lo_open = false) {
    if (!v.is_number()) {
      problems.push_back(path + ": expected a number");
      return false;
    }
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        problems.push_back(path + ": expected an integer");
        return false;
      }
    }
    const double d = v.get<double>();
    if (d < lo || d > hi || (lo_open && d == lo)) {
      std::ostringstream os;
      os << path << ": " << d << " outside " << (lo_open ? "(" : "[") << lo << ", " << hi << "]";
      problems.push_back(os.str());
      return false;
    }
    out = v.get<T>();
    return true;
  }

  template <class T>
  void number(const json& obj, const std::string& where, const char* key, T& out, double lo, double hi,
              bool lo_open = false) {
    if (obj.contains(key)) value(obj.at(key), where + key, out, lo, hi, lo_open);
  }

  void boolean(const json& obj, const std::string& where, const char* key, bool& out) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_boolean()) {
      problems.push_back(where + key + ": expected true or false");
      return;
    }
    out = obj.at(key).get<bool>();
  }

  template <class Parse, class T>
  void choice(const json& obj, const std::string& where, const char* key, T& out, Parse parse) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      problems.push_back(where + key + ": expected a string");
      return;
    }
    auto parsed = parse(v.get<std::string>());
    if (!parsed) {
      problems.push_back(where + key + ": unknown value '" + v.get<std::string>() + "'");
      return;
    }
    out = *parsed;
  }

  template <class T>
  void number_array(const json& obj, const std::string& where, const char* key, std::vector<T>& out, double lo,
                    double hi) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      problems.push_back(where + key + ": expected an array");
      return;
    }
    std::vector<T> tmp(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!value(v[i], where + key + "[" + std::to_string(i) + "]", tmp[i], lo, hi)) return;
    }
    out = std::move(tmp);
  }
};

std::optional<MethodKind> parse_kind(const std::string& s) {
  if (s == "rmqcal") return MethodKind::rmqcal;
  if (s == "serial") return MethodKind::serial;
  if (s == "parallel") return MethodKind::parallel;
  if (s == "random") return MethodKind::random;
  return std::nullopt;
}

std::optional<TableFormat> parse_format(const std::string& s) {
  if (s == "dense-csv") return TableFormat::dense_csv;
  if (s == "sparse") return TableFormat::sparse;
  return std::nullopt;
}

std::optional<InitialBatch> parse_initial(const std::string& s) {
  if (s == "ted") return InitialBatch::ted;
  if (s == "random") return InitialBatch::random;
  return std::nullopt;
}

std::optional<KernelKind> parse_kernel(const std::string& s) {
  if (s == "rbf") return KernelKind::rbf;
  if (s == "linear") return KernelKind::linear;
  return std::nullopt;
}

std::optional<DiversityReduce> parse_reduce(const std::string& s) {
  if (s == "max") return DiversityReduce::max;
  if (s == "min") return DiversityReduce::min;
  return std::nullopt;
}

std::optional<BordaInput> parse_borda_input(const std::string& s) {
  if (s == "positional") return BordaInput::positional;
  if (s == "rank") return BordaInput::rank;
  return std::nullopt;
}

std::optional<TedScoreAxis> parse_axis(const std::string& s) {
  if (s == "row") return TedScoreAxis::row;
  if (s == "column") return TedScoreAxis::column;
  return std::nullopt;
}

constexpr double kHuge = 1e300;

MethodSpec read_method(Reader& r, const json& m, const std::string& where) {
  MethodSpec spec;
  if (!r.object(m, where.substr(0, where.size() - 1))) return spec;
  r.unknown_keys(m, where,
                 {"name", "kind", "criteria", "aggregator", "batch_size", "initial_batch", "initial_size", "max_topup",
                  "committee_size", "tun1", "tun2", "p", "truncate", "borda_input", "diversity_reduce", "learner",
                  "ted", "serial_layers", "parallel_weights"});
  r.choice(m, where, "kind", spec.kind, parse_kind);
  if (!m.contains("name")) {
    spec.name = std::string(to_string(spec.kind));
  } else if (!m.at("name").is_string() || m.at("name").get<std::string>().empty()) {
    r.problems.push_back(where + "name: expected a non-empty string");
  } else {
    spec.name = m.at("name").get<std::string>();
  }

  ALConfig& c = spec.config;
  if (m.contains("criteria")) {
    const json& v = m.at("criteria");
    if (!v.is_array() || v.empty()) {
      r.problems.push_back(where + "criteria: expected a non-empty array of names");
    } else {
      c.criteria.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        auto parsed = v[i].is_string() ? parse_criterion(v[i].get<std::string>()) : std::nullopt;
        if (!parsed) {
          r.problems.push_back(where + "criteria[" + std::to_string(i) + "]: unknown criterion");
        } else {
          c.criteria.push_back(*parsed);
        }
      }
    }
  }
  r.choice(m, where, "aggregator", c.aggregator, [](const std::string& s) { return parse_aggregator(s); });
  r.number(m, where, "batch_size", c.batch_size, 1, kHuge);
  r.choice(m, where, "initial_batch", c.initial_batch, parse_initial);
  r.number(m, where, "initial_size", c.initial_size, 2, kHuge);
  r.number(m, where, "max_topup", c.max_topup, 0, kHuge);
  r.number(m, where, "committee_size", c.committee_size, 2, kHuge);
  r.number(m, where, "tun1", c.aggregation.tun1, 0.0, 1.0, true);
  r.number(m, where, "tun2", c.aggregation.tun2, 0, kHuge);
  r.number(m, where, "p", c.aggregation.p, 1.0, kHuge);
  r.boolean(m, where, "truncate", c.aggregation.truncate);
  r.choice(m, where, "borda_input", c.aggregation.borda_input, parse_borda_input);
  r.choice(m, where, "diversity_reduce", c.diversity_reduce, parse_reduce);
  r.number_array(m, where, "serial_layers", c.serial_layers, 1, kHuge);
  r.number_array(m, where, "parallel_weights", c.parallel_weights, 0.0, kHuge);
  if (c.aggregation.tun1 >= 1.0) r.problems.push_back(where + "tun1: must be below 1");

  if (m.contains("learner")) {
    const json& l = m.at("learner");
    const std::string lw = where + "learner.";
    if (r.object(l, where + "learner")) {
      r.unknown_keys(l, lw, {"kernel", "gamma", "reg", "max_iter", "tol"});
      r.choice(l, lw, "kernel", c.learner.kernel, parse_kernel);
      r.number(l, lw, "gamma", c.learner.gamma, 0.0, kHuge);
      r.number(l, lw, "reg", c.learner.reg, 0.0, kHuge, true);
      r.number(l, lw, "max_iter", c.learner.max_iter, 1, 1e9);
      r.number(l, lw, "tol", c.learner.tol, 0.0, kHuge, true);
    }
  }
  if (m.contains("ted")) {
    const json& t = m.at("ted");
    const std::string tw = where + "ted.";
    if (r.object(t, where + "ted")) {
      r.unknown_keys(t, tw, {"lambda", "max_iter", "tol", "transpose_reg", "axis"});
      r.number(t, tw, "lambda", c.ted.lambda, 0.0, kHuge, true);
      r.number(t, tw, "max_iter", c.ted.max_iter, 1, 1e9);
      r.number(t, tw, "tol", c.ted.tol, 0.0, kHuge, true);
      r.boolean(t, tw, "transpose_reg", c.ted.transpose_reg);
      r.choice(t, tw, "axis", c.ted.axis, parse_axis);
    }
  }
  if (spec.kind == MethodKind::random && (m.contains("criteria") || m.contains("aggregator"))) {
    r.problems.push_back(where + "criteria: not used by the random baseline");
  }
  return spec;
}

}  // namespace

std::string_view to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::rmqcal: return "rmqcal";
    case MethodKind::serial: return "serial";
    case MethodKind::parallel: return "parallel";
    case MethodKind::random: return "random";
  }
  return "unknown";
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

ALConfig ExperimentConfig::run_config(const MethodSpec& method, std::uint64_t seed) const {
  ALConfig c = method.config;
  c.seed = seed;
  c.budget = budget;
  c.checkpoints = checkpoints;
  c.test_fraction = test_fraction;
  return c;
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  Reader r;
  ExperimentConfig cfg;
  if (!doc.is_object()) throw ConfigError({"<root>: expected an object"});
  r.unknown_keys(doc, "",
                 {"dataset", "test_fraction", "seeds", "checkpoints", "budget", "alpha", "methods", "output", "threads"});

  if (!doc.contains("dataset")) {
    r.problems.push_back("dataset: required");
  } else if (r.object(doc.at("dataset"), "dataset")) {
    const json& d = doc.at("dataset");
    r.unknown_keys(d, "dataset.", {"path", "format", "normalize", "synthetic"});
    r.choice(d, "dataset.", "format", cfg.dataset.format, parse_format);
    r.boolean(d, "dataset.", "normalize", cfg.dataset.normalize);
    if (d.contains("path") == d.contains("synthetic")) {
      r.problems.push_back("dataset: exactly one of 'path' or 'synthetic' is required");
    }
    if (d.contains("path")) {
      if (!d.at("path").is_string()) {
        r.problems.push_back("dataset.path: expected a string");
      } else {
        std::filesystem::path p = d.at("path").get<std::string>();
        cfg.dataset.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
      }
    }
    if (d.contains("synthetic") && r.object(d.at("synthetic"), "dataset.synthetic")) {
      const json& s = d.at("synthetic");
      const std::string sw = "dataset.synthetic.";
      TwoBlobSpec spec;
      r.unknown_keys(s, sw, {"samples", "dims", "center_distance", "sigma", "positive_fraction", "seed"});
      r.number(s, sw, "samples", spec.samples, 2, 1e9);
      r.number(s, sw, "dims", spec.dims, 1, 1e6);
      r.number(s, sw, "center_distance", spec.center_distance, 0.0, kHuge);
      r.number(s, sw, "sigma", spec.sigma, 0.0, kHuge, true);
      r.number(s, sw, "positive_fraction", spec.positive_fraction, 0.0, 1.0, true);
      r.number(s, sw, "seed", spec.seed, 0, 1.8e19);
      cfg.dataset.synthetic = spec;
    }
  }

  r.number(doc, "", "test_fraction", cfg.test_fraction, 0.0, 1.0, true);
  if (cfg.test_fraction >= 1.0) r.problems.push_back("test_fraction: must be below 1");
  r.number(doc, "", "budget", cfg.budget, 0.0, 1.0, true);
  r.number(doc, "", "alpha", cfg.alpha, 0.0, 1.0, true);
  r.number(doc, "", "threads", cfg.threads, 1, 1024);
  r.number_array(doc, "", "checkpoints", cfg.checkpoints, 0.0, 1.0);
  for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
    if (cfg.checkpoints[i] <= 0.0 || (i > 0 && cfg.checkpoints[i] <= cfg.checkpoints[i - 1])) {
      r.problems.push_back("checkpoints: must be strictly increasing in (0, 1]");
      break;
    }
  }
  if (cfg.checkpoints.empty()) r.problems.push_back("checkpoints: at least one required");
  if (!cfg.checkpoints.empty() && cfg.checkpoints.back() > cfg.budget + 1e-12) {
    r.problems.push_back("checkpoints: last checkpoint exceeds the budget");
  }

  if (doc.contains("seeds")) {
    r.number_array(doc, "", "seeds", cfg.seeds, 0, 1.8e19);
    if (cfg.seeds.empty()) r.problems.push_back("seeds: at least one seed required");
    if (std::set<std::uint64_t>(cfg.seeds.begin(), cfg.seeds.end()).size() != cfg.seeds.size()) {
      r.problems.push_back("seeds: duplicate seed");
    }
  } else {
    for (std::uint64_t s = 0; s < 10; ++s) cfg.seeds.push_back(s);
  }

  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) {
      r.problems.push_back("output: expected a string");
    } else {
      cfg.output = doc.at("output").get<std::string>();
    }
  }

  if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty()) {
    r.problems.push_back("methods: expected a non-empty array");
  } else {
    std::set<std::string> names;
    const json& ms = doc.at("methods");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string where = "methods[" + std::to_string(i) + "].";
      MethodSpec spec = read_method(r, ms[i], where);
      if (!spec.name.empty() && !names.insert(spec.name).second) {
        r.problems.push_back(where + "name: duplicate method name '" + spec.name + "'");
      }
      cfg.methods.push_back(std::move(spec));
    }
  }

  if (r.problems.empty()) {
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
      try {
        cfg.run_config(cfg.methods[i], 0).validate();
      } catch (const PreconditionError& e) {
        r.problems.push_back("methods[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open"});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return parse_config(doc, path.parent_path());
}

Dataset load_dataset(const DatasetSource& source) {
  Dataset data = source.path ? load_table(*source.path, source.format) : make_two_blobs(*source.synthetic);
  return source.normalize ? normalize_features(data) : data;
}

}  // namespace rmqcal::cli
