#include "tailorsql/eval/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace tailorsql::eval {

bool topk_hit(const std::vector<std::size_t>& ranked, const std::vector<std::size_t>& relevant, std::size_t k) {
  const auto end = ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size()));
  return std::all_of(relevant.begin(), relevant.end(),
                     [&](std::size_t r) { return std::find(ranked.begin(), end, r) != end; });
}

std::optional<double> topk_recall(const std::vector<std::vector<std::size_t>>& ranked,
                                  const std::vector<std::vector<std::size_t>>& relevant, std::size_t k) {
  if (ranked.size() != relevant.size()) throw std::invalid_argument("ranked and relevant lists differ in length");
  std::size_t counted = 0;
  std::size_t hits = 0;
  for (std::size_t q = 0; q < ranked.size(); ++q) {
    if (relevant[q].empty()) continue;
    ++counted;
    if (topk_hit(ranked[q], relevant[q], k)) ++hits;
  }
  if (counted == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(counted);
}

}  // namespace tailorsql::eval
