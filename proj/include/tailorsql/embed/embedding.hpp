#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tailorsql/diagnostics.hpp"
#include "tailorsql/embed/types.hpp"

namespace tailorsql::embed {

// (a·b)/(‖a‖‖b‖). A zero vector gives 0 and, when `diagnostics` is set, a
// "zero_vector" diagnostic. Sizes must match.
double cosine_similarity(std::span<const double> a, std::span<const double> b, Diagnostics* diagnostics = nullptr);
double cosine_similarity(std::span<const double> a, std::span<const float> b, Diagnostics* diagnostics = nullptr);

// 1 − cos for relevant pairs, max(0, cos) otherwise.
double cosine_loss(double cosine, bool relevant);
double cosine_loss(std::span<const double> question, std::span<const double> doc, bool relevant);

// Σ w_k·proxy_k. Falls back to the raw proxy (with a "zero_tailored"
// diagnostic) when the sum is the zero vector.
Vector tailored_embedding(const ProxySet& proxies, const WeightVector& w, Diagnostics* diagnostics = nullptr);

double norm(std::span<const double> v);
Vector mean(const std::vector<const Vector*>& vectors);

// Proxy embeddings of every document.
//  - relevant_docs[q]: indices of the documents relevant to logged query q;
//  - sql_embeddings[q]: raw embedding of q's SQL text;
//  - question_embeddings[q]: embedding of q's synthetic question, if any.
// For document d with relevant query set Q_d: e_sql and e_synthq are the
// means over Q_d, e_cooccur the mean raw embedding of the other documents
// relevant to some query in Q_d (each counted once). A proxy with no evidence
// falls back to e_raw.
std::vector<ProxySet> compute_proxies(const std::vector<Vector>& raw,
                                      const std::vector<std::vector<std::size_t>>& relevant_docs,
                                      const std::vector<Vector>& sql_embeddings,
                                      const std::vector<std::optional<Vector>>& question_embeddings);

}  // namespace tailorsql::embed
