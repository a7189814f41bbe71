#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tailorsql/alloc/types.hpp"
#include "tailorsql/diagnostics.hpp"

namespace tailorsql::alloc {

// t_tbl ≈ T·p·p_tbl, t_col ≈ T·p·(1−p_tbl)·p_col, t_hint ≈ T·p·(1−p_tbl)·(1−p_col).
// Each share is floored, then the leftover tokens up to round(T·p) go to the
// largest fractional parts, so every component is within one token of its
// exact value and the sum never exceeds T. Throws OutOfBounds unless
// 0 < p ≤ 1, p_tbl, p_col ∈ [0, 1] and T > 0.
ContextAllocation reparam_to_tokens(const ReparamPoint& r, std::int64_t T);

// Scales all three budgets by cap / total when the total exceeds `cap`, with
// the same floor-and-distribute rounding.
ContextAllocation downscale_to_cap(const ContextAllocation& a, std::int64_t cap);

struct BoConfig {
  int budget = 25;
  std::uint64_t seed = 42;
  double xi = 0.01;           // EI exploration margin, standardized units
  int random_candidates = 2000;
  int refine_starts = 10;
  std::optional<std::int64_t> cap;  // proportional down-scaling of every candidate
};

struct BoEvaluation {
  ReparamPoint point;
  ContextAllocation allocation;
  double score = 0.0;
  bool failed = false;
};

struct BoResult {
  ReparamPoint best_point;
  ContextAllocation best_allocation;
  double best_score = 0.0;
  std::vector<BoEvaluation> trace;  // in evaluation order
};

using BoxObjective = std::function<double(const ReparamPoint&)>;
using AllocationObjective = std::function<double(const ContextAllocation&)>;

// Maximizes `objective` over [kPMin, 1] × [0, 1]² with `budget` evaluations:
// a Latin-hypercube design of ⌈budget/4⌉ points, then one expected-improvement
// step per remaining evaluation on a Matérn-5/2 Gaussian process. An
// evaluation that throws scores 0 and adds an "objective_failure"
// diagnostic. Allocations in the trace use `T`. Throws std::invalid_argument
// when budget < 5.
BoResult bayes_optimize_box(const BoxObjective& objective, std::int64_t T, const BoConfig& config,
                            Diagnostics* diagnostics = nullptr);

// Same search with the objective evaluated on the (optionally capped)
// allocation of each point.
BoResult bayes_optimize(const AllocationObjective& objective, std::int64_t T, const BoConfig& config,
                        Diagnostics* diagnostics = nullptr);

}  // namespace tailorsql::alloc
