#include "tailorsql/alloc/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tailorsql::alloc {

namespace {

constexpr double kLengthScales[] = {0.05, 0.08, 0.12, 0.18, 0.25, 0.35, 0.5, 0.7, 1.0, 1.5, 2.5};

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double GaussianProcess::kernel(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double length_scale) {
  const double r = (a - b).norm() / length_scale;
  const double s5r = std::sqrt(5.0) * r;
  return (1.0 + s5r + 5.0 * r * r / 3.0) * std::exp(-s5r);
}

double GaussianProcess::log_marginal_likelihood(double length_scale, Eigen::LLT<Eigen::MatrixXd>* llt_out,
                                                Eigen::VectorXd* alpha_out) const {
  const auto n = static_cast<Eigen::Index>(x_.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) K(i, j) = K(j, i) = kernel(x_[i], x_[j], length_scale);
  }
  for (double jitter = noise_; jitter <= 1e-1; jitter *= 10.0) {
    Eigen::MatrixXd Kj = K;
    Kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(Kj);
    if (llt.info() != Eigen::Success) continue;
    Eigen::VectorXd alpha = llt.solve(y_);
    double log_det = 0.0;
    const Eigen::MatrixXd L = llt.matrixL();
    for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(L(i, i));
    if (llt_out != nullptr) *llt_out = llt;
    if (alpha_out != nullptr) *alpha_out = alpha;
    return -0.5 * y_.dot(alpha) - log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  }
  return -std::numeric_limits<double>::infinity();
}

void GaussianProcess::fit(const std::vector<Eigen::Vector3d>& x, const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size()) throw std::invalid_argument("GaussianProcess::fit: bad training data");
  x_ = x;
  const auto n = static_cast<Eigen::Index>(y.size());
  y_mean_ = 0.0;
  for (double v : y) y_mean_ += v;
  y_mean_ /= static_cast<double>(n);
  double var = 0.0;
  for (double v : y) var += (v - y_mean_) * (v - y_mean_);
  var /= static_cast<double>(n);
  y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
  y_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) y_(i) = (y[static_cast<std::size_t>(i)] - y_mean_) / y_scale_;

  double best = -std::numeric_limits<double>::infinity();
  for (double ls : kLengthScales) {
    const double lml = log_marginal_likelihood(ls, nullptr, nullptr);
    if (lml > best) {
      best = lml;
      length_scale_ = ls;
    }
  }
  if (!std::isfinite(log_marginal_likelihood(length_scale_, &llt_, &alpha_))) {
    throw std::runtime_error("GaussianProcess::fit: kernel matrix is not positive definite");
  }
}

GaussianProcess::Prediction GaussianProcess::predict(const Eigen::Vector3d& x) const {
  const auto n = static_cast<Eigen::Index>(x_.size());
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = kernel(x, x_[static_cast<std::size_t>(i)], length_scale_);
  const double mean = k.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(k);
  const double var = std::max(0.0, 1.0 - v.squaredNorm());
  return {mean * y_scale_ + y_mean_, std::sqrt(var) * y_scale_};
}

double GaussianProcess::expected_improvement(const Eigen::Vector3d& x, double best, double xi) const {
  const auto p = predict(x);
  const double mu = (p.mean - y_mean_) / y_scale_;
  const double s = p.stddev / y_scale_;
  const double gap = mu - (best - y_mean_) / y_scale_ - xi;
  if (s < 1e-12) return std::max(0.0, gap);
  const double z = gap / s;
  return gap * normal_cdf(z) + s * normal_pdf(z);
}

}  // namespace tailorsql::alloc
