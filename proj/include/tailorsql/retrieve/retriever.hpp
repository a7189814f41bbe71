#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tailorsql/alloc/types.hpp"
#include "tailorsql/docs/store.hpp"
#include "tailorsql/embed/provider.hpp"

namespace tailorsql::retrieve {

enum class EmbeddingMode { Raw, Tailored };

struct Candidate {
  std::size_t index = 0;  // position in the store
  std::string id;
  double score = 0.0;
  std::uint64_t observed_count = 1;
  std::size_t tokens = 0;
};

struct RetrievedDoc {
  std::size_t index = 0;
  std::string id;
  docs::DocClass cls = docs::DocClass::Table;
  double score = 0.0;
  std::size_t tokens = 0;

  friend bool operator==(const RetrievedDoc&, const RetrievedDoc&) = default;
};

// Orders by score (descending), then observed_count (descending), then id.
bool ranks_before(const Candidate& a, const Candidate& b);

// Sorts the candidates and admits each one whose tokens still fit in the
// remaining budget; oversized ones are skipped and later ones still tried.
// Returns the admitted candidates in rank order.
std::vector<Candidate> greedy_fill(std::vector<Candidate> candidates, std::int64_t budget);

struct RetrievalResult {
  std::vector<RetrievedDoc> tables;
  std::vector<RetrievedDoc> columns;
  std::vector<RetrievedDoc> hints;
  std::size_t table_tokens = 0;
  std::size_t column_tokens = 0;
  std::size_t hint_tokens = 0;
  embed::Vector question;

  // Tables, columns, hints, each in rank order.
  [[nodiscard]] std::vector<RetrievedDoc> all() const;
  [[nodiscard]] std::size_t total_tokens() const { return table_tokens + column_tokens + hint_tokens; }
  friend bool operator==(const RetrievalResult&, const RetrievalResult&) = default;
};

// Cosine similarity of the question with every document accepted by `keep`,
// using raw or tailored document embeddings.
std::vector<Candidate> score_documents(const embed::Vector& question, const docs::Store& store, EmbeddingMode mode,
                                       const std::function<bool(docs::DocClass)>& keep);

// Specialized retrieval: each class (tables, columns, hints) is filled
// independently within its own budget.
RetrievalResult retrieve(const embed::Vector& question, const alloc::ContextAllocation& allocation,
                         const docs::Store& store, EmbeddingMode mode);
RetrievalResult retrieve(std::string_view question, const alloc::ContextAllocation& allocation,
                         const docs::Store& store, EmbeddingMode mode, embed::EmbeddingProvider& provider);

// Generic retrieval: schema documents only, raw embeddings, one pooled budget.
// Never reads hints, tailored embeddings or the allocation.
RetrievalResult retrieve_generic(const embed::Vector& question, std::int64_t budget, const docs::Store& store);

}  // namespace tailorsql::retrieve
