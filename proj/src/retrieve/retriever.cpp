#include "tailorsql/retrieve/retriever.hpp"

#include <algorithm>

#include "tailorsql/embed/embedding.hpp"

namespace tailorsql::retrieve {

using docs::DocClass;

bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.observed_count != b.observed_count) return a.observed_count > b.observed_count;
  return a.id < b.id;
}

std::vector<Candidate> greedy_fill(std::vector<Candidate> candidates, std::int64_t budget) {
  std::sort(candidates.begin(), candidates.end(), ranks_before);
  std::vector<Candidate> out;
  std::int64_t remaining = std::max<std::int64_t>(budget, 0);
  for (auto& c : candidates) {
    const auto tokens = static_cast<std::int64_t>(c.tokens);
    if (tokens <= remaining) {
      remaining -= tokens;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<RetrievedDoc> RetrievalResult::all() const {
  std::vector<RetrievedDoc> out = tables;
  out.insert(out.end(), columns.begin(), columns.end());
  out.insert(out.end(), hints.begin(), hints.end());
  return out;
}

std::vector<Candidate> score_documents(const embed::Vector& question, const docs::Store& store, EmbeddingMode mode,
                                       const std::function<bool(DocClass)>& keep) {
  std::vector<Candidate> out;
  // Hints are only visited when the caller keeps them, so a schema-only scan
  // never touches hint documents.
  const std::size_t end = keep(DocClass::JoinHint) || keep(DocClass::FilterHint) || keep(DocClass::GroupByHint)
                              ? store.size()
                              : store.schema_count();
  for (std::size_t i = 0; i < end; ++i) {
    const auto& doc = store.document(i);
    if (!keep(doc.cls)) continue;
    const auto emb = mode == EmbeddingMode::Raw ? store.raw_embedding(i) : store.tailored_embedding(i);
    const double score = emb.empty() ? 0.0 : embed::cosine_similarity(question, emb);
    out.push_back({i, doc.id, score, doc.observed_count, doc.token_count});
  }
  return out;
}

namespace {

std::vector<RetrievedDoc> to_retrieved(const std::vector<Candidate>& picked, const docs::Store& store,
                                       std::size_t& tokens) {
  std::vector<RetrievedDoc> out;
  tokens = 0;
  for (const auto& c : picked) {
    out.push_back({c.index, c.id, store.document(c.index).cls, c.score, c.tokens});
    tokens += c.tokens;
  }
  return out;
}

}  // namespace

RetrievalResult retrieve(const embed::Vector& question, const alloc::ContextAllocation& allocation,
                         const docs::Store& store, EmbeddingMode mode) {
  RetrievalResult r;
  r.question = question;
  if (store.empty()) return r;
  const auto all = score_documents(question, store, mode, [](DocClass) { return true; });
  std::vector<Candidate> tables, columns, hints;
  for (const auto& c : all) {
    const auto cls = store.document(c.index).cls;
    (cls == DocClass::Table ? tables : cls == DocClass::Column ? columns : hints).push_back(c);
  }
  r.tables = to_retrieved(greedy_fill(std::move(tables), allocation.t_tbl), store, r.table_tokens);
  r.columns = to_retrieved(greedy_fill(std::move(columns), allocation.t_col), store, r.column_tokens);
  r.hints = to_retrieved(greedy_fill(std::move(hints), allocation.t_hint), store, r.hint_tokens);
  return r;
}

RetrievalResult retrieve(std::string_view question, const alloc::ContextAllocation& allocation,
                         const docs::Store& store, EmbeddingMode mode, embed::EmbeddingProvider& provider) {
  return retrieve(provider.embed(question), allocation, store, mode);
}

RetrievalResult retrieve_generic(const embed::Vector& question, std::int64_t budget, const docs::Store& store) {
  RetrievalResult r;
  r.question = question;
  if (store.empty()) return r;
  auto schema = score_documents(question, store, EmbeddingMode::Raw, [](DocClass c) { return docs::is_schema(c); });
  for (const auto& c : greedy_fill(std::move(schema), budget)) {
    const auto cls = store.document(c.index).cls;
    (cls == DocClass::Table ? r.tables : r.columns).push_back({c.index, c.id, cls, c.score, c.tokens});
    (cls == DocClass::Table ? r.table_tokens : r.column_tokens) += c.tokens;
  }
  return r;
}

}  // namespace tailorsql::retrieve
