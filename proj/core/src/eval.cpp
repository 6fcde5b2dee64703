#include "rmqcal/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmqcal/error.hpp"

namespace rmqcal {

namespace {

void check_pair(std::size_t a, std::size_t b) {
  if (a != b) throw PreconditionError("prediction and truth lengths differ");
  if (a == 0) throw PreconditionError("empty prediction set");
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge");
}

}  // namespace

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  check_pair(predicted.size(), truth.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

double f1_score(std::span<const int> predicted, std::span<const int> truth, int positive_class) {
  check_pair(predicted.size(), truth.size());
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == positive_class;
    const bool t = truth[i] == positive_class;
    tp += p && t;
    fp += p && !t;
    fn += !p && t;
  }
  if (tp + fp == 0.0) return 0.0;
  const double precision = tp / (tp + fp);
  const double recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double auc(std::span<const double> scores, std::span<const int> truth) {
  check_pair(scores.size(), truth.size());
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // midranks over tie groups
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (truth[order[k]] > 0) {
        pos_rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DomainError("auc: truth labels contain a single class");
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw PreconditionError("incomplete_beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw PreconditionError("student_t_cdf: df must be > 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::win: return "win";
    case Verdict::tie: return "tie";
    case Verdict::loss: return "loss";
  }
  return "tie";
}

PairedTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() != b.size()) throw PreconditionError("paired_t_test: samples are not paired");
  if (a.size() < 2) throw PreconditionError("paired_t_test: need at least two pairs");
  const double n = static_cast<double>(a.size());
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  PairedTestResult r;
  r.mean_diff = mean;
  // Differences equal to rounding noise count as zero variance.
  const double scale = std::max({1.0, std::abs(mean)});
  if (sd <= 1e-14 * scale) {
    if (std::abs(mean) <= 1e-14 * scale) {
      r.mean_diff = 0.0;
      r.t_stat = 0.0;
      r.p_value = 1.0;
      r.verdict = Verdict::tie;
    } else {
      r.t_stat = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
      r.verdict = mean > 0 ? Verdict::win : Verdict::loss;
    }
    return r;
  }
  r.t_stat = mean / (sd / std::sqrt(n));
  r.p_value = 2.0 * student_t_cdf(-std::abs(r.t_stat), n - 1.0);
  if (r.p_value >= alpha) {
    r.verdict = Verdict::tie;
  } else {
    r.verdict = mean > 0 ? Verdict::win : Verdict::loss;
  }
  return r;
}

void LearningCurve::validate() const {
  if (checkpoints.empty()) throw PreconditionError("curve '" + method + "': no checkpoints");
  if (values.size() != seeds.size()) throw PreconditionError("curve '" + method + "': one row per seed required");
  for (const auto& row : values) {
    if (row.size() != checkpoints.size()) {
      throw PreconditionError("curve '" + method + "': seeds do not share the checkpoint grid");
    }
  }
}

std::vector<double> LearningCurve::column(std::size_t c) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& row : values) out.push_back(row.at(c));
  return out;
}

std::string WinTieLoss::format() const {
  return std::to_string(win) + "/" + std::to_string(tie) + "/" + std::to_string(loss);
}

WinTieLossTable win_tie_loss(std::span<const CurvePair> pairs, double alpha) {
  if (pairs.empty()) throw PreconditionError("win_tie_loss: no curve pairs");
  WinTieLossTable table;
  table.checkpoints = pairs.front().a->checkpoints;
  table.per_checkpoint.assign(table.checkpoints.size(), {});
  for (const auto& pair : pairs) {
    pair.a->validate();
    pair.b->validate();
    if (pair.a->checkpoints != table.checkpoints || pair.b->checkpoints != table.checkpoints) {
      throw PreconditionError("win_tie_loss: checkpoint grids differ");
    }
    if (pair.a->seeds != pair.b->seeds) throw PreconditionError("win_tie_loss: seed sets differ");
    std::vector<Verdict> row;
    for (std::size_t c = 0; c < table.checkpoints.size(); ++c) {
      const auto result = paired_t_test(pair.a->column(c), pair.b->column(c), alpha);
      row.push_back(result.verdict);
      WinTieLoss cell;
      cell.win = result.verdict == Verdict::win;
      cell.tie = result.verdict == Verdict::tie;
      cell.loss = result.verdict == Verdict::loss;
      table.per_checkpoint[c] += cell;
      table.totals += cell;
    }
    table.verdicts.push_back(std::move(row));
  }
  return table;
}

}  // namespace rmqcal
