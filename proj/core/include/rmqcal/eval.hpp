#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rmqcal {

double accuracy(std::span<const int> predicted, std::span<const int> truth);

/// F1 for `positive_class`; 0 when there are no positive predictions or P + R = 0.
double f1_score(std::span<const int> predicted, std::span<const int> truth, int positive_class = 1);

/// Mann-Whitney AUC of `scores` (higher = more positive); tied pairs count 1/2.
double auc(std::span<const double> scores, std::span<const int> truth);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

enum class Verdict { win, tie, loss };
std::string_view to_string(Verdict v);

struct PairedTestResult {
  double mean_diff = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  Verdict verdict = Verdict::tie;
};

/// Two-sided paired t-test on a - b (df = n - 1). A zero-variance
/// difference is a tie when its mean is 0, otherwise a win/loss by sign.
PairedTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// Metric values of one method: values[seed][checkpoint].
struct LearningCurve {
  std::string method;
  std::vector<double> checkpoints;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> values;

  void validate() const;
  /// Per-seed values at checkpoint column c.
  std::vector<double> column(std::size_t c) const;
};

struct WinTieLoss {
  int win = 0;
  int tie = 0;
  int loss = 0;

  int total() const { return win + tie + loss; }
  std::string format() const;  // "W/T/L"
  WinTieLoss& operator+=(const WinTieLoss& o) {
    win += o.win;
    tie += o.tie;
    loss += o.loss;
    return *this;
  }
};

struct CurvePair {
  const LearningCurve* a = nullptr;
  const LearningCurve* b = nullptr;
};

struct WinTieLossTable {
  std::vector<double> checkpoints;
  std::vector<WinTieLoss> per_checkpoint;  // counts over all pairs
  WinTieLoss totals;
  std::vector<std::vector<Verdict>> verdicts;  // [pair][checkpoint], from a's point of view
};

/// t-tests a against b at every checkpoint of every pair. All curves must share
/// the checkpoint grid and, within a pair, the seed list.
WinTieLossTable win_tie_loss(std::span<const CurvePair> pairs, double alpha = 0.05);

}  // namespace rmqcal
