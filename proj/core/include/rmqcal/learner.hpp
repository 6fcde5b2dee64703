#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rmqcal {

enum class KernelKind { rbf, linear };

struct Kernel {
  KernelKind kind = KernelKind::rbf;
  double gamma = 1.0;

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b) const;
  /// Gram matrix between the rows of `a` and the rows of `b`.
  Eigen::MatrixXd gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const;
};

struct LearnerConfig {
  KernelKind kernel = KernelKind::rbf;
  double gamma = 0.0;  // <= 0 selects 1 / (number of features)
  double reg = 1e-2;
  int max_iter = 100;
  double tol = 1e-10;

  /// Throws PreconditionError unless reg, tol > 0, max_iter > 0 and gamma is finite.
  void validate() const;
  Kernel kernel_for(std::size_t dims) const;
};

inline constexpr double kPosteriorFloor = 1e-6;
inline constexpr double kDegeneratePosterior = 0.99;

struct Prediction {
  double p_pos = 0.5;
  int y_max = 1;
  double p_max = 0.5;
};

/// Turns a positive-class posterior into (p_pos, y_max, p_max); ties go to +1.
Prediction make_prediction(double p_pos);

// Kernel logistic regression model. Decision value
// f(x) = sum_i coeffs_i * k(x, support_i) + intercept.
class Model {
public:
  Model() = default;
  Model(Kernel kernel, Eigen::MatrixXd support, Eigen::VectorXd coeffs, double intercept);
  static Model constant(int label, std::size_t dims);

  double decision(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Prediction predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Positive-class posterior for every row of `x`.
  Eigen::VectorXd positive_posteriors(const Eigen::MatrixXd& x) const;

  bool degenerate() const { return degenerate_; }
  bool converged() const { return converged_; }
  std::size_t dims() const { return dims_; }
  double intercept() const { return intercept_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

private:
  friend Model fit(const LearnerConfig&, const Eigen::MatrixXd&, std::span<const int>);

  Kernel kernel_;
  Eigen::MatrixXd support_;
  Eigen::VectorXd coeffs_;
  double intercept_ = 0.0;
  std::size_t dims_ = 0;
  bool degenerate_ = false;
  int degenerate_label_ = 1;
  bool converged_ = true;
};

/// Minimises mean logistic loss + (reg/2) a'Ka with damped Newton steps.
/// A single-class training set yields a constant model (degenerate() == true).
Model fit(const LearnerConfig& config, const Eigen::MatrixXd& x, std::span<const int> y);

struct Committee {
  std::vector<Model> members;

  std::size_t size() const { return members.size(); }
  /// members x rows matrix of positive-class posteriors.
  Eigen::MatrixXd positive_posteriors(const Eigen::MatrixXd& x) const;
};

/// g members, each fitted on a bootstrap resample of (x, y). Member m draws
/// from Rng::derive(seed, m).
Committee fit_committee(const LearnerConfig& config, const Eigen::MatrixXd& x, std::span<const int> y,
                        std::size_t g, std::uint64_t seed);

}  // namespace rmqcal
