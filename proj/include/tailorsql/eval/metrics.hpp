#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace tailorsql::eval {

// 1 when every relevant document is among the first K of `ranked`.
bool topk_hit(const std::vector<std::size_t>& ranked, const std::vector<std::size_t>& relevant, std::size_t k);

// Mean of topk_hit over questions that have at least one relevant document;
// nullopt when there is none.
std::optional<double> topk_recall(const std::vector<std::vector<std::size_t>>& ranked,
                                  const std::vector<std::vector<std::size_t>>& relevant, std::size_t k);

}  // namespace tailorsql::eval
