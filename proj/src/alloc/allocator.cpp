#include "tailorsql/alloc/allocator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tailorsql/alloc/gp.hpp"
#include "tailorsql/errors.hpp"

namespace tailorsql::alloc {

namespace {

// Floors each share and hands the remaining tokens (total − Σ floors) to the
// largest fractional parts; ties go to the earlier class.
ContextAllocation distribute(const std::array<double, 3>& exact, std::int64_t total, std::int64_t T) {
  std::array<std::int64_t, 3> t{};
  std::array<double, 3> frac{};
  std::int64_t used = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double x = std::max(0.0, exact[i]);
    t[i] = static_cast<std::int64_t>(std::floor(x));
    frac[i] = x - static_cast<double>(t[i]);
    used += t[i];
  }
  // Floating error can push a floor past the target total; pull it back.
  while (used > total) {
    auto it = std::max_element(t.begin(), t.end());
    --*it;
    --used;
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; used < total && k < 3; ++k) {
    ++t[order[k]];
    ++used;
  }
  return {t[0], t[1], t[2], T};
}

std::array<double, 3> to_array(const ReparamPoint& r) { return {r.p, r.p_tbl, r.p_col}; }

ReparamPoint clamp_to_box(std::array<double, 3> x) {
  return {std::clamp(x[0], kPMin, 1.0), std::clamp(x[1], 0.0, 1.0), std::clamp(x[2], 0.0, 1.0)};
}

Eigen::Vector3d as_vector(const ReparamPoint& r) { return {r.p, r.p_tbl, r.p_col}; }

std::vector<ReparamPoint> latin_hypercube(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<std::vector<int>, 3> strata;
  for (auto& s : strata) {
    s.resize(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 0);
    std::shuffle(s.begin(), s.end(), rng);
  }
  std::vector<ReparamPoint> out;
  for (int i = 0; i < n; ++i) {
    std::array<double, 3> x{};
    for (std::size_t d = 0; d < 3; ++d) x[d] = (strata[d][static_cast<std::size_t>(i)] + unit(rng)) / n;
    out.push_back({kPMin + (1.0 - kPMin) * x[0], x[1], x[2]});
  }
  return out;
}

ReparamPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return {kPMin + (1.0 - kPMin) * unit(rng), unit(rng), unit(rng)};
}

// Coordinate search from `start`, halving the step down to 1e-3.
ReparamPoint refine(const GaussianProcess& gp, ReparamPoint start, double best, double xi, double& value) {
  value = gp.expected_improvement(as_vector(start), best, xi);
  for (double step = 0.1; step >= 1e-3; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t d = 0; d < 3; ++d) {
        for (double dir : {-1.0, 1.0}) {
          auto x = to_array(start);
          x[d] += dir * step;
          const auto cand = clamp_to_box(x);
          const double v = gp.expected_improvement(as_vector(cand), best, xi);
          if (v > value) {
            value = v;
            start = cand;
            improved = true;
          }
        }
      }
    }
  }
  return start;
}

double min_distance(const ReparamPoint& p, const std::vector<BoEvaluation>& trace) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : trace) best = std::min(best, (as_vector(p) - as_vector(e.point)).norm());
  return best;
}

}  // namespace

ContextAllocation reparam_to_tokens(const ReparamPoint& r, std::int64_t T) {
  if (T <= 0) throw OutOfBounds("token limit must be positive");
  if (!(r.p > 0.0 && r.p <= 1.0)) throw OutOfBounds("p must lie in (0, 1]");
  if (!(r.p_tbl >= 0.0 && r.p_tbl <= 1.0)) throw OutOfBounds("p_tbl must lie in [0, 1]");
  if (!(r.p_col >= 0.0 && r.p_col <= 1.0)) throw OutOfBounds("p_col must lie in [0, 1]");
  const double scaled = static_cast<double>(T) * r.p;
  const std::int64_t total = std::min<std::int64_t>(T, std::llround(scaled));
  return distribute({scaled * r.p_tbl, scaled * (1.0 - r.p_tbl) * r.p_col, scaled * (1.0 - r.p_tbl) * (1.0 - r.p_col)},
                    total, T);
}

ContextAllocation downscale_to_cap(const ContextAllocation& a, std::int64_t cap) {
  const auto total = a.total();
  if (cap < 0) throw OutOfBounds("cap must be nonnegative");
  if (total <= cap) return a;
  const double f = static_cast<double>(cap) / static_cast<double>(total);
  auto out = distribute({a.t_tbl * f, a.t_col * f, a.t_hint * f}, cap, a.T);
  return out;
}

BoResult bayes_optimize_box(const BoxObjective& objective, std::int64_t T, const BoConfig& config,
                            Diagnostics* diagnostics) {
  if (config.budget < 5) throw std::invalid_argument("Bayesian optimization needs a budget of at least 5");
  std::mt19937_64 rng(config.seed);
  BoResult result;

  auto evaluate = [&](const ReparamPoint& point) {
    BoEvaluation e;
    e.point = point;
    e.allocation = reparam_to_tokens(point, T);
    if (config.cap) e.allocation = downscale_to_cap(e.allocation, *config.cap);
    try {
      e.score = objective(point);
      if (!std::isfinite(e.score)) throw std::runtime_error("non-finite score");
    } catch (const std::exception& ex) {
      e.score = 0.0;
      e.failed = true;
      if (diagnostics != nullptr) diagnostics->add("objective_failure", "", ex.what());
    }
    result.trace.push_back(e);
  };

  const int initial = (config.budget + 3) / 4;
  for (const auto& p : latin_hypercube(initial, rng)) evaluate(p);

  GaussianProcess gp;
  while (static_cast<int>(result.trace.size()) < config.budget) {
    std::vector<Eigen::Vector3d> xs;
    std::vector<double> ys;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : result.trace) {
      xs.push_back(as_vector(e.point));
      ys.push_back(e.score);
      best = std::max(best, e.score);
    }
    gp.fit(xs, ys);

    std::vector<std::pair<double, ReparamPoint>> pool;
    for (int i = 0; i < config.random_candidates; ++i) {
      const auto p = random_point(rng);
      pool.emplace_back(gp.expected_improvement(as_vector(p), best, config.xi), p);
    }
    const auto starts = std::min<std::size_t>(static_cast<std::size_t>(config.refine_starts), pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(starts), pool.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    ReparamPoint next = pool.front().second;
    double next_value = -1.0;
    for (std::size_t i = 0; i < starts; ++i) {
      double v = 0.0;
      const auto cand = refine(gp, pool[i].second, best, config.xi, v);
      if (v > next_value && min_distance(cand, result.trace) > 1e-9) {
        next_value = v;
        next = cand;
      }
    }
    if (min_distance(next, result.trace) <= 1e-9) next = random_point(rng);
    evaluate(next);
  }

  std::size_t best_index = 0;
  for (std::size_t i = 1; i < result.trace.size(); ++i) {
    if (result.trace[i].score > result.trace[best_index].score) best_index = i;
  }
  result.best_point = result.trace[best_index].point;
  result.best_allocation = result.trace[best_index].allocation;
  result.best_score = result.trace[best_index].score;
  return result;
}

BoResult bayes_optimize(const AllocationObjective& objective, std::int64_t T, const BoConfig& config,
                        Diagnostics* diagnostics) {
  auto box = [&](const ReparamPoint& p) {
    auto a = reparam_to_tokens(p, T);
    if (config.cap) a = downscale_to_cap(a, *config.cap);
    return objective(a);
  };
  return bayes_optimize_box(box, T, config, diagnostics);
}

}  // namespace tailorsql::alloc
