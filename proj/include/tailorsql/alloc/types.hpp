#pragma once

#include <cstdint>
#include <string>

namespace tailorsql::alloc {

inline constexpr double kPMin = 0.01;

struct ReparamPoint {
  double p = 1.0;
  double p_tbl = 0.0;
  double p_col = 0.0;

  friend bool operator==(const ReparamPoint&, const ReparamPoint&) = default;
};

struct ContextAllocation {
  std::int64_t t_tbl = 0;
  std::int64_t t_col = 0;
  std::int64_t t_hint = 0;
  std::int64_t T = 0;

  [[nodiscard]] std::int64_t total() const { return t_tbl + t_col + t_hint; }
  friend bool operator==(const ContextAllocation&, const ContextAllocation&) = default;
};

// Contents of allocation.json.
struct AllocationRecord {
  ReparamPoint point;
  ContextAllocation allocation;
  std::string objective_kind;
  double score = 0.0;
  std::uint64_t seed = 0;
  int budget = 0;
  int evaluations = 0;

  friend bool operator==(const AllocationRecord&, const AllocationRecord&) = default;
};

}  // namespace tailorsql::alloc
