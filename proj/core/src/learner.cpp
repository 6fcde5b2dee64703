#include "rmqcal/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmqcal/error.hpp"
#include "rmqcal/random.hpp"

namespace rmqcal {

namespace {

double sigmoid(double f) {
  if (f >= 0.0) return 1.0 / (1.0 + std::exp(-f));
  const double e = std::exp(f);
  return e / (1.0 + e);
}

// log(1 + exp(-m)), stable for large |m|
double logistic_loss(double margin) {
  if (margin > 0.0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

double clamp_posterior(double p) { return std::clamp(p, kPosteriorFloor, 1.0 - kPosteriorFloor); }

}  // namespace

double Kernel::operator()(const Eigen::Ref<const Eigen::VectorXd>& a,
                          const Eigen::Ref<const Eigen::VectorXd>& b) const {
  if (kind == KernelKind::linear) return a.dot(b);
  return std::exp(-gamma * (a - b).squaredNorm());
}

Eigen::MatrixXd Kernel::gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd cross = a * b.transpose();
  if (kind == KernelKind::linear) return cross;
  const Eigen::VectorXd an = a.rowwise().squaredNorm();
  const Eigen::VectorXd bn = b.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = (-2.0 * cross).colwise() + an;
  d2.rowwise() += bn.transpose();
  return (-gamma * d2.cwiseMax(0.0)).array().exp().matrix();
}

void LearnerConfig::validate() const {
  if (!(reg > 0.0)) throw PreconditionError("learner: reg must be > 0");
  if (!(tol > 0.0)) throw PreconditionError("learner: tol must be > 0");
  if (max_iter <= 0) throw PreconditionError("learner: max_iter must be positive");
  if (!std::isfinite(gamma)) throw PreconditionError("learner: gamma must be finite");
}

Kernel LearnerConfig::kernel_for(std::size_t dims) const {
  Kernel k;
  k.kind = kernel;
  k.gamma = gamma > 0.0 ? gamma : 1.0 / static_cast<double>(std::max<std::size_t>(dims, 1));
  return k;
}

Prediction make_prediction(double p_pos) {
  Prediction p;
  p.p_pos = p_pos;
  p.y_max = p_pos >= 0.5 ? 1 : -1;
  p.p_max = std::max(p_pos, 1.0 - p_pos);
  return p;
}

Model::Model(Kernel kernel, Eigen::MatrixXd support, Eigen::VectorXd coeffs, double intercept)
    : kernel_(kernel),
      support_(std::move(support)),
      coeffs_(std::move(coeffs)),
      intercept_(intercept),
      dims_(static_cast<std::size_t>(support_.cols())) {}

Model Model::constant(int label, std::size_t dims) {
  Model m;
  m.dims_ = dims;
  m.degenerate_ = true;
  m.degenerate_label_ = label;
  return m;
}

double Model::decision(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (static_cast<std::size_t>(x.size()) != dims_) {
    throw PreconditionError("predict: expected " + std::to_string(dims_) + " features, got " +
                            std::to_string(x.size()));
  }
  if (degenerate_) {
    const double p = degenerate_label_ > 0 ? kDegeneratePosterior : 1.0 - kDegeneratePosterior;
    return std::log(p / (1.0 - p));
  }
  double f = intercept_;
  for (Eigen::Index i = 0; i < support_.rows(); ++i) f += coeffs_(i) * kernel_(x, support_.row(i).transpose());
  return f;
}

Prediction Model::predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (degenerate_) {
    if (static_cast<std::size_t>(x.size()) != dims_) throw PreconditionError("predict: dimension mismatch");
    return make_prediction(degenerate_label_ > 0 ? kDegeneratePosterior : 1.0 - kDegeneratePosterior);
  }
  return make_prediction(clamp_posterior(sigmoid(decision(x))));
}

Eigen::VectorXd Model::positive_posteriors(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.cols()) != dims_) throw PreconditionError("predict: dimension mismatch");
  if (degenerate_) {
    return Eigen::VectorXd::Constant(x.rows(), degenerate_label_ > 0 ? kDegeneratePosterior
                                                                     : 1.0 - kDegeneratePosterior);
  }
  Eigen::VectorXd f = kernel_.gram(x, support_) * coeffs_;
  f.array() += intercept_;
  return f.unaryExpr([](double v) { return clamp_posterior(sigmoid(v)); });
}

Model fit(const LearnerConfig& config, const Eigen::MatrixXd& x, std::span<const int> y) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(y.size());
  if (n == 0) throw PreconditionError("fit: empty training set");
  if (x.rows() != n) throw PreconditionError("fit: feature rows and labels differ");
  const auto dims = static_cast<std::size_t>(x.cols());
  const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), -1) != y.end();
  if (!has_pos || !has_neg) return Model::constant(has_pos ? 1 : -1, dims);

  const Kernel kernel = config.kernel_for(dims);
  const Eigen::MatrixXd k = kernel.gram(x, x);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t(i) = y[static_cast<std::size_t>(i)] > 0 ? 1.0 : 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double reg = config.reg;

  auto objective = [&](const Eigen::VectorXd& alpha, const Eigen::VectorXd& f) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) loss += logistic_loss((2.0 * t(i) - 1.0) * f(i));
    return loss * inv_n + 0.5 * reg * alpha.dot(k * alpha);
  };

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  double b = 0.0;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  double current = objective(alpha, f);
  bool converged = false;

  Eigen::MatrixXd system(n + 1, n + 1);
  Eigen::VectorXd rhs(n + 1);
  for (int iter = 0; iter < config.max_iter; ++iter) {
    Eigen::VectorXd p = f.unaryExpr([](double v) { return sigmoid(v); });
    Eigen::VectorXd w = (p.array() * (1.0 - p.array())).matrix() * inv_n;
    Eigen::VectorXd r = (p - t) * inv_n;

    // The full Newton system is K-premultiplied; this reduced form shares its
    // solutions and stays well-posed when K is singular (duplicate rows).
    system.topLeftCorner(n, n) = w.asDiagonal() * k;
    system.topLeftCorner(n, n).diagonal().array() += reg;
    system.topRightCorner(n, 1) = w;
    system.bottomLeftCorner(1, n) = w.transpose() * k;
    system(n, n) = w.sum();
    rhs.head(n) = -(r + reg * alpha);
    rhs(n) = -r.sum();

    const double grad_norm = (k * rhs.head(n)).cwiseAbs().maxCoeff() + std::abs(rhs(n));
    if (grad_norm < config.tol) {
      converged = true;
      break;
    }

    Eigen::VectorXd step = system.partialPivLu().solve(rhs);
    Eigen::VectorXd d_alpha = step.head(n);
    const double d_b = step(n);
    const Eigen::VectorXd d_f = k * d_alpha + Eigen::VectorXd::Constant(n, d_b);

    double scale = 1.0;
    Eigen::VectorXd next_alpha;
    Eigen::VectorXd next_f;
    double next = current;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      next_alpha = alpha + scale * d_alpha;
      next_f = f + scale * d_f;
      next = objective(next_alpha, next_f);
      if (next <= current) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      converged = true;  // no further descent possible at machine precision
      break;
    }
    const double change = scale * (step.cwiseAbs().maxCoeff());
    alpha = std::move(next_alpha);
    b += scale * d_b;
    f = std::move(next_f);
    current = next;
    if (change < config.tol) {
      converged = true;
      break;
    }
  }

  Model m(kernel, x, alpha, b);
  m.converged_ = converged;
  return m;
}

Eigen::MatrixXd Committee::positive_posteriors(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(members.size()), x.rows());
  for (std::size_t m = 0; m < members.size(); ++m) {
    out.row(static_cast<Eigen::Index>(m)) = members[m].positive_posteriors(x).transpose();
  }
  return out;
}

Committee fit_committee(const LearnerConfig& config, const Eigen::MatrixXd& x, std::span<const int> y,
                        std::size_t g, std::uint64_t seed) {
  if (g < 2) throw PreconditionError("committee size must be >= 2");
  if (y.empty()) throw PreconditionError("fit_committee: empty training set");
  const std::size_t n = y.size();
  Committee c;
  c.members.reserve(g);
  for (std::size_t m = 0; m < g; ++m) {
    Rng rng = Rng::derive(seed, m);
    Eigen::MatrixXd xb(static_cast<Eigen::Index>(n), x.cols());
    std::vector<int> yb(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = rng.uniform_index(n);
      xb.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(j));
      yb[i] = y[j];
    }
    c.members.push_back(fit(config, xb, yb));
  }
  return c;
}

}  // namespace rmqcal
