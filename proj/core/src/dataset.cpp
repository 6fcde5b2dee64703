#include "rmqcal/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rmqcal/error.hpp"
#include "rmqcal/random.hpp"

namespace rmqcal {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) fields.push_back(trim(field));
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

// Maps up to two distinct raw label strings to -1/+1 by sorted order
// (numeric order when every label parses as a number).
std::vector<int> coerce_labels(const std::vector<std::string>& raw) {
  if (raw.empty()) throw DomainError("no samples");
  bool numeric = std::all_of(raw.begin(), raw.end(),
                             [](const std::string& s) { return parse_double(s).has_value(); });
  std::vector<std::string> distinct(raw.begin(), raw.end());
  auto less = [numeric](const std::string& a, const std::string& b) {
    return numeric ? *parse_double(a) < *parse_double(b) : a < b;
  };
  auto equal = [numeric](const std::string& a, const std::string& b) {
    return numeric ? *parse_double(a) == *parse_double(b) : a == b;
  };
  std::sort(distinct.begin(), distinct.end(), less);
  distinct.erase(std::unique(distinct.begin(), distinct.end(), equal), distinct.end());
  if (distinct.size() > 2) {
    throw DomainError("expected a binary problem, found " + std::to_string(distinct.size()) +
                      " distinct labels");
  }
  std::vector<int> labels(raw.size());
  if (distinct.size() == 1) {
    const bool negative = numeric && *parse_double(distinct[0]) <= 0.0;
    std::fill(labels.begin(), labels.end(), negative ? -1 : 1);
    return labels;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) labels[i] = equal(raw[i], distinct[0]) ? -1 : 1;
  return labels;
}

std::vector<std::size_t> iota_ids(std::size_t n) {
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  return ids;
}

}  // namespace

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw PreconditionError("feature rows and label count differ");
  }
  if (ids.size() != labels.size()) throw PreconditionError("id count and label count differ");
  for (int y : labels) {
    if (y != -1 && y != 1) throw PreconditionError("labels must be -1 or +1");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features = rows(indices);
  out.labels = labels_of(indices);
  out.ids.reserve(indices.size());
  for (std::size_t i : indices) out.ids.push_back(ids.at(i));
  return out;
}

Eigen::MatrixXd Dataset::rows(std::span<const std::size_t> indices) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), features.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= size()) throw PreconditionError("row index out of range");
    out.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(indices[r]));
  }
  return out;
}

std::vector<int> Dataset::labels_of(std::span<const std::size_t> indices) const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(labels.at(i));
  return out;
}

Dataset load_dense_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  std::size_t width = 0;
  bool header_seen = false;
  std::vector<std::vector<double>> values;
  std::vector<std::string> raw_labels;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto fields = split_line(line, ',');
    if (!header_seen) {
      header_seen = true;
      width = fields.size();
      if (width < 2) throw ParseError("header needs at least one feature and a label column", row);
      continue;
    }
    if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(fields.size()),
                       row);
    }
    std::vector<double> rowvals(width - 1);
    for (std::size_t c = 0; c + 1 < width; ++c) {
      auto v = parse_double(fields[c]);
      if (!v) throw ParseError("non-numeric feature value '" + fields[c] + "'", row);
      rowvals[c] = *v;
    }
    if (fields.back().empty()) throw ParseError("missing label", row);
    values.push_back(std::move(rowvals));
    raw_labels.push_back(fields.back());
  }
  if (values.empty()) throw DomainError("empty table");

  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(width - 1));
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (std::size_t c = 0; c + 1 < width; ++c) {
      d.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r][c];
    }
  }
  d.labels = coerce_labels(raw_labels);
  d.ids = iota_ids(values.size());
  return d;
}

Dataset load_sparse(std::istream& in) {
  struct Row {
    std::vector<std::pair<std::size_t, double>> entries;
  };
  std::string line;
  std::size_t row = 0;
  std::size_t max_index = 0;
  std::vector<Row> rows;
  std::vector<std::string> raw_labels;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream ss(t);
    std::string token;
    ss >> token;
    raw_labels.push_back(token);
    Row r;
    while (ss >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError("expected idx:val, found '" + token + "'", row);
      std::size_t index = 0;
      const std::string idx = token.substr(0, colon);
      auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
      if (ec != std::errc() || ptr != idx.data() + idx.size() || index == 0) {
        throw ParseError("bad 1-based index '" + idx + "'", row);
      }
      auto value = parse_double(token.substr(colon + 1));
      if (!value) throw ParseError("bad value in '" + token + "'", row);
      max_index = std::max(max_index, index);
      r.entries.emplace_back(index - 1, *value);
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw DomainError("empty table");

  Dataset d;
  d.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                     static_cast<Eigen::Index>(max_index));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (auto [c, v] : rows[r].entries) {
      d.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  d.labels = coerce_labels(raw_labels);
  d.ids = iota_ids(rows.size());
  return d;
}

Dataset load_table(const std::filesystem::path& path, TableFormat format) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path.string());
  return format == TableFormat::dense_csv ? load_dense_csv(in) : load_sparse(in);
}

void write_dense_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t c = 0; c < data.dims(); ++c) out << 'x' << c + 1 << ',';
  out << "label\n";
  std::ostringstream cell;
  cell.precision(17);
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.dims(); ++c) {
      cell.str({});
      cell << data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      out << cell.str() << ',';
    }
    out << data.labels[r] << '\n';
  }
}

MinMaxScaler MinMaxScaler::fit(const Eigen::MatrixXd& features) {
  MinMaxScaler s;
  if (features.rows() == 0) {
    s.min = Eigen::VectorXd::Zero(features.cols());
    s.max = Eigen::VectorXd::Zero(features.cols());
    return s;
  }
  s.min = features.colwise().minCoeff().transpose();
  s.max = features.colwise().maxCoeff().transpose();
  return s;
}

Eigen::MatrixXd MinMaxScaler::transform(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd out(features.rows(), features.cols());
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const double range = max(c) - min(c);
    if (!(range > 0.0)) {
      out.col(c).setZero();
      continue;
    }
    out.col(c) = ((features.col(c).array() - min(c)) / range).cwiseMax(0.0).cwiseMin(1.0);
  }
  return out;
}

Dataset normalize_features(const Dataset& data) {
  Dataset out = data;
  out.features = MinMaxScaler::fit(data.features).transform(data.features);
  return out;
}

bool PoolState::is_unlabeled(std::size_t index) const {
  return std::binary_search(unlabeled.begin(), unlabeled.end(), index);
}

void PoolState::check_partition(std::size_t n) const {
  std::vector<char> seen(n, 0);
  auto mark = [&](const std::vector<std::size_t>& set, const char* name) {
    for (std::size_t i : set) {
      if (i >= n) throw std::logic_error(std::string(name) + " index out of range");
      if (seen[i]) throw std::logic_error(std::string(name) + " index appears twice");
      seen[i] = 1;
    }
  };
  mark(labeled, "labeled");
  mark(unlabeled, "unlabeled");
  mark(test, "test");
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::logic_error("labeled, unlabeled and test do not cover the dataset");
  }
  if (labeled.size() != labeled_labels.size()) throw std::logic_error("label bookkeeping mismatch");
}

Split split_pool(const Dataset& data, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw PreconditionError("test_fraction must lie in (0, 1)");
  }
  if (data.size() < 2) throw DomainError("need at least two samples to split");
  std::vector<std::size_t> order = iota_ids(data.size());
  Rng rng(spec.seed);
  rng.shuffle(order);
  auto n_test = static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(data.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, data.size() - 1);

  Split split;
  split.pool.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.pool.unlabeled.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(split.pool.test.begin(), split.pool.test.end());
  std::sort(split.pool.unlabeled.begin(), split.pool.unlabeled.end());
  split.test = data.subset(split.pool.test);
  return split;
}

PoolState oracle_label(const PoolState& pool, std::span<const std::size_t> batch, const Dataset& truth) {
  std::vector<std::size_t> sorted(batch.begin(), batch.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("query batch contains a duplicate index");
  }
  for (std::size_t i : sorted) {
    if (!pool.is_unlabeled(i)) {
      throw PreconditionError("index " + std::to_string(i) + " is not in the unlabeled pool");
    }
  }
  PoolState next = pool;
  for (std::size_t i : batch) {
    next.labeled.push_back(i);
    next.labeled_labels.push_back(truth.labels.at(i));
  }
  std::vector<std::size_t> remaining;
  remaining.reserve(pool.unlabeled.size() - sorted.size());
  std::set_difference(pool.unlabeled.begin(), pool.unlabeled.end(), sorted.begin(), sorted.end(),
                      std::back_inserter(remaining));
  next.unlabeled = std::move(remaining);
  next.history.emplace_back(batch.begin(), batch.end());
  ++next.iteration;
  return next;
}

Dataset make_two_blobs(const TwoBlobSpec& spec) {
  if (spec.samples < 2 || spec.dims < 1) throw PreconditionError("two-blob: need >= 2 samples and >= 1 dim");
  Rng rng(spec.seed);
  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(spec.samples), static_cast<Eigen::Index>(spec.dims));
  d.labels.resize(spec.samples);
  const auto n_pos = static_cast<std::size_t>(std::llround(spec.positive_fraction * static_cast<double>(spec.samples)));
  for (std::size_t i = 0; i < spec.samples; ++i) {
    const int y = i < n_pos ? 1 : -1;
    d.labels[i] = y;
    for (std::size_t c = 0; c < spec.dims; ++c) {
      double center = (c == 0) ? 0.5 * y * spec.center_distance : 0.0;
      d.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = center + spec.sigma * rng.normal();
    }
  }
  d.ids = iota_ids(spec.samples);
  return d;
}

}  // namespace rmqcal
