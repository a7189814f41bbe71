#include "tailorsql/embed/training.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "tailorsql/errors.hpp"

namespace tailorsql::embed {

namespace {

using Mat4 = std::array<std::array<double, kProxyCount>, kProxyCount>;

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Cached inner products: with e = Σ w_k P_k, u·e = w·a and ‖e‖² = wᵀGw, so the
// objective never touches the d-dimensional vectors after setup.
struct Precomputed {
  std::vector<Mat4> gram;                                 // per doc
  std::vector<double> raw_norm;                           // per doc
  std::vector<double> question_norm;                      // per question
  std::vector<std::array<double, kProxyCount>> products;  // [q * docs + d]
};

Precomputed precompute(const TrainingSet& set) {
  Precomputed pc;
  const auto nd = set.proxies.size();
  const auto nq = set.questions.size();
  pc.gram.resize(nd);
  pc.raw_norm.resize(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t i = 0; i < kProxyCount; ++i) {
      for (std::size_t j = i; j < kProxyCount; ++j) {
        pc.gram[d][i][j] = pc.gram[d][j][i] = dot(set.proxies[d][i], set.proxies[d][j]);
      }
    }
    pc.raw_norm[d] = std::sqrt(pc.gram[d][0][0]);
  }
  pc.question_norm.resize(nq);
  pc.products.resize(nq * nd);
  for (std::size_t q = 0; q < nq; ++q) {
    pc.question_norm[q] = std::sqrt(dot(set.questions[q], set.questions[q]));
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t k = 0; k < kProxyCount; ++k) {
        pc.products[q * nd + d][k] = dot(set.questions[q], set.proxies[d][k]);
      }
    }
  }
  return pc;
}

double evaluate(const WeightVector& w, const TrainingSet& set, const Precomputed& pc, Gradient* grad) {
  const auto nd = set.proxies.size();
  const auto nq = set.questions.size();
  if (grad != nullptr) grad->fill(0.0);

  // Per-document norm of the tailored embedding and G·w.
  std::vector<double> e_norm(nd);
  std::vector<std::array<double, kProxyCount>> gw(nd);
  std::vector<bool> fallback(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    double sq = 0.0;
    for (std::size_t i = 0; i < kProxyCount; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < kProxyCount; ++j) s += pc.gram[d][i][j] * w[j];
      gw[d][i] = s;
      sq += w[i] * s;
    }
    fallback[d] = sq <= 0.0;  // NaN propagates so the caller sees a non-finite gradient
    e_norm[d] = fallback[d] ? pc.raw_norm[d] : std::sqrt(sq);
  }

  double total = 0.0;
  for (std::size_t q = 0; q < nq; ++q) {
    const auto& rel = set.relevant[q];
    const double un = pc.question_norm[q];
    for (std::size_t d = 0; d < nd; ++d) {
      const bool relevant = std::binary_search(rel.begin(), rel.end(), d);
      const auto& a = pc.products[q * nd + d];
      if (un == 0.0 || e_norm[d] == 0.0) {
        total += relevant ? 1.0 : 0.0;
        continue;
      }
      double ue;
      if (fallback[d]) {
        ue = a[0];
      } else {
        ue = 0.0;
        for (std::size_t k = 0; k < kProxyCount; ++k) ue += w[k] * a[k];
      }
      const double en = e_norm[d];
      const double cos = ue / (un * en);
      if (relevant) {
        total += 1.0 - cos;
      } else if (cos > 0.0) {
        total += cos;
      }
      if (grad == nullptr || fallback[d]) continue;
      const double sign = relevant ? -1.0 : (cos > 0.0 ? 1.0 : 0.0);
      if (sign == 0.0) continue;
      // d cos / d w_k = a_k / (|u||e|) − (u·e)(Gw)_k / (|u||e|³)
      const double inv = 1.0 / (un * en);
      const double inv3 = ue / (un * en * en * en);
      for (std::size_t k = 0; k < kProxyCount; ++k) (*grad)[k] += sign * (a[k] * inv - gw[d][k] * inv3);
    }
  }
  return total;
}

}  // namespace

double objective(const WeightVector& w, const TrainingSet& set) {
  if (set.empty()) return 0.0;
  return evaluate(w, set, precompute(set), nullptr);
}

double objective_and_gradient(const WeightVector& w, const TrainingSet& set, Gradient& grad) {
  grad.fill(0.0);
  if (set.empty()) return 0.0;
  return evaluate(w, set, precompute(set), &grad);
}

WeightVector project_to_simplex(const std::array<double, kProxyCount>& v) {
  std::array<double, kProxyCount> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < kProxyCount; ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  WeightVector out;
  for (std::size_t k = 0; k < kProxyCount; ++k) out[k] = std::max(0.0, v[k] - theta);
  return out;
}

OptimizeResult optimize_weights(const TrainingSet& set, const OptimizeConfig& config, Diagnostics* diagnostics) {
  if (set.empty()) throw std::invalid_argument("optimize_weights: empty training set");
  const auto pc = precompute(set);

  OptimizeResult result;
  WeightVector w = config.initial.on_simplex() ? config.initial : project_to_simplex(config.initial.w);
  Gradient g{};
  double f = evaluate(w, set, pc, &g);
  result.initial_objective = f;
  result.trace.push_back(f);

  for (int it = 0; it < config.max_iterations; ++it) {
    double gmax = 0.0;
    for (double x : g) {
      if (!std::isfinite(x)) {
        if (diagnostics != nullptr) diagnostics->add("non_finite_gradient", "", "iteration " + std::to_string(it));
        throw NonFiniteGradient("non-finite gradient at iteration " + std::to_string(it));
      }
      gmax = std::max(gmax, std::abs(x));
    }
    if (gmax <= 1e-12 * (1.0 + std::abs(f))) break;  // stationary, e.g. a flat objective

    double step = config.learning_rate;
    bool accepted = false;
    WeightVector next;
    double f_next = f;
    while (step >= config.min_step) {
      std::array<double, kProxyCount> trial{};
      for (std::size_t k = 0; k < kProxyCount; ++k) trial[k] = w[k] - step * g[k];
      next = project_to_simplex(trial);
      f_next = evaluate(next, set, pc, nullptr);
      if (f_next <= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || next == w) break;
    w = next;
    f = evaluate(w, set, pc, &g);
    result.trace.push_back(f);
    result.iterations = it + 1;
    const auto n = result.trace.size();
    if (n > static_cast<std::size_t>(config.window) &&
        result.trace[n - 1 - config.window] - f < config.tolerance) {
      break;
    }
  }
  result.weights = w;
  result.final_objective = f;
  return result;
}

}  // namespace tailorsql::embed
