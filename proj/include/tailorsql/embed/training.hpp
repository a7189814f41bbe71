#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tailorsql/diagnostics.hpp"
#include "tailorsql/embed/types.hpp"

namespace tailorsql::embed {

// Every (question, document) pair takes part in the objective; a pair is
// relevant when the document index is listed for the question.
struct TrainingSet {
  std::vector<ProxySet> proxies;                     // per document
  std::vector<Vector> questions;                     // per question
  std::vector<std::vector<std::size_t>> relevant;    // per question, sorted document indices

  [[nodiscard]] bool empty() const { return proxies.empty() || questions.empty(); }
};

using Gradient = std::array<double, kProxyCount>;

// Training objective: Σ_docs Σ_questions cosine_loss(question, tailored(doc, w), relevant).
// Evaluated for any w in R^4, not only on the simplex.
double objective(const WeightVector& w, const TrainingSet& set);

// Objective value and its gradient with respect to w.
double objective_and_gradient(const WeightVector& w, const TrainingSet& set, Gradient& grad);

// Euclidean projection onto {w ≥ 0, Σw = 1} (sort-based).
WeightVector project_to_simplex(const std::array<double, kProxyCount>& v);

struct OptimizeConfig {
  WeightVector initial;
  double learning_rate = 0.05;
  int max_iterations = 500;
  double tolerance = 1e-6;  // minimum objective improvement over `window` iterations
  int window = 20;
  double min_step = 1e-12;
};

struct OptimizeResult {
  WeightVector weights;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // objective after each accepted step, trace[0] = initial
};

// Projected gradient descent with backtracking halving. Every accepted step
// does not increase the objective. Throws std::invalid_argument on an empty
// set and NonFiniteGradient when the gradient is not finite.
OptimizeResult optimize_weights(const TrainingSet& set, const OptimizeConfig& config = {},
                                Diagnostics* diagnostics = nullptr);

}  // namespace tailorsql::embed
