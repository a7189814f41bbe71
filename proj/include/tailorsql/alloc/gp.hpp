#pragma once

#include <Eigen/Dense>

#include <vector>

namespace tailorsql::alloc {

// Zero-mean Gaussian process on standardized targets with an isotropic
// Matérn-5/2 kernel. The length scale is picked from a fixed grid by log
// marginal likelihood.
class GaussianProcess {
 public:
  void fit(const std::vector<Eigen::Vector3d>& x, const std::vector<double>& y);

  struct Prediction {
    double mean = 0.0;  // in original units
    double stddev = 0.0;
  };
  [[nodiscard]] Prediction predict(const Eigen::Vector3d& x) const;

  // Expected improvement over `best` (original units) with margin xi given
  // in standardized units.
  [[nodiscard]] double expected_improvement(const Eigen::Vector3d& x, double best, double xi) const;

  [[nodiscard]] double length_scale() const noexcept { return length_scale_; }
  static double kernel(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double length_scale);

 private:
  double log_marginal_likelihood(double length_scale, Eigen::LLT<Eigen::MatrixXd>* llt_out,
                                 Eigen::VectorXd* alpha_out) const;

  std::vector<Eigen::Vector3d> x_;
  Eigen::VectorXd y_;  // standardized
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double length_scale_ = 0.3;
  double noise_ = 1e-6;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

}  // namespace tailorsql::alloc
