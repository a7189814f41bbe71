#include "tailorsql/alloc/surrogate.hpp"

#include <algorithm>

namespace tailorsql::alloc {

double retrieval_f1(const std::vector<std::size_t>& retrieved, const std::vector<std::size_t>& relevant) {
  if (retrieved.empty() || relevant.empty()) return 0.0;
  std::size_t hits = 0;
  for (auto r : retrieved) {
    if (std::binary_search(relevant.begin(), relevant.end(), r)) ++hits;
  }
  if (hits == 0) return 0.0;
  const double precision = static_cast<double>(hits) / static_cast<double>(retrieved.size());
  const double recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  return 2.0 * precision * recall / (precision + recall);
}

SurrogateObjective::SurrogateObjective(const docs::Store& store, std::vector<WorkloadQuestion> workload,
                                       retrieve::EmbeddingMode mode)
    : workload_(std::move(workload)) {
  for (auto& q : workload_) std::sort(q.relevant.begin(), q.relevant.end());
  ranked_.resize(workload_.size());
  for (std::size_t i = 0; i < workload_.size(); ++i) {
    auto all = retrieve::score_documents(workload_[i].embedding, store, mode, [](docs::DocClass) { return true; });
    std::sort(all.begin(), all.end(), retrieve::ranks_before);
    for (auto& c : all) {
      const auto cls = store.document(c.index).cls;
      const std::size_t slot = cls == docs::DocClass::Table ? 0 : cls == docs::DocClass::Column ? 1 : 2;
      ranked_[i][slot].push_back(std::move(c));
    }
  }
}

double SurrogateObjective::operator()(const ContextAllocation& allocation) const {
  if (workload_.empty()) return 0.0;
  const std::array<std::int64_t, 3> budgets{allocation.t_tbl, allocation.t_col, allocation.t_hint};
  double sum = 0.0;
  std::vector<std::size_t> retrieved;
  for (std::size_t i = 0; i < workload_.size(); ++i) {
    retrieved.clear();
    for (std::size_t c = 0; c < 3; ++c) {
      // Candidates are already ranked, so the greedy fill is a single pass.
      std::int64_t remaining = std::max<std::int64_t>(budgets[c], 0);
      for (const auto& cand : ranked_[i][c]) {
        const auto tokens = static_cast<std::int64_t>(cand.tokens);
        if (tokens <= remaining) {
          remaining -= tokens;
          retrieved.push_back(cand.index);
        }
      }
    }
    sum += retrieval_f1(retrieved, workload_[i].relevant);
  }
  return sum / static_cast<double>(workload_.size());
}

double surrogate_objective(const ContextAllocation& allocation, const std::vector<WorkloadQuestion>& workload,
                           const docs::Store& store, retrieve::EmbeddingMode mode) {
  return SurrogateObjective(store, workload, mode)(allocation);
}

}  // namespace tailorsql::alloc
