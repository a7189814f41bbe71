#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tailorsql/alloc/types.hpp"
#include "tailorsql/docs/store.hpp"
#include "tailorsql/retrieve/retriever.hpp"

namespace tailorsql::alloc {

struct WorkloadQuestion {
  embed::Vector embedding;
  std::vector<std::size_t> relevant;  // sorted store indices
};

// F1 of the retrieved document set against the relevant set; 0 when either is
// empty.
double retrieval_f1(const std::vector<std::size_t>& retrieved, const std::vector<std::size_t>& relevant);

// Mean retrieval F1 over a synthetic workload under a given allocation. The
// document ranking per question does not depend on the allocation, so it is
// computed once up front.
class SurrogateObjective {
 public:
  SurrogateObjective(const docs::Store& store, std::vector<WorkloadQuestion> workload,
                     retrieve::EmbeddingMode mode = retrieve::EmbeddingMode::Tailored);

  double operator()(const ContextAllocation& allocation) const;
  [[nodiscard]] std::size_t size() const noexcept { return workload_.size(); }

 private:
  std::vector<WorkloadQuestion> workload_;
  // Per question, per class (table, column, hint): candidates in rank order.
  std::vector<std::array<std::vector<retrieve::Candidate>, 3>> ranked_;
};

// One-shot form of SurrogateObjective.
double surrogate_objective(const ContextAllocation& allocation, const std::vector<WorkloadQuestion>& workload,
                           const docs::Store& store,
                           retrieve::EmbeddingMode mode = retrieve::EmbeddingMode::Tailored);

}  // namespace tailorsql::alloc
