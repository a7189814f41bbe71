#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tailorsql/docs/catalog.hpp"
#include "tailorsql/sql/query_log.hpp"
#include "tailorsql/sql/subcomponents.hpp"

namespace tailorsql::docs {

enum class DocClass { Table, Column, JoinHint, FilterHint, GroupByHint };

inline constexpr DocClass kAllClasses[] = {DocClass::Table, DocClass::Column, DocClass::JoinHint,
                                           DocClass::FilterHint, DocClass::GroupByHint};

std::string_view to_string(DocClass c);
std::optional<DocClass> doc_class_from_string(std::string_view s);
inline bool is_schema(DocClass c) { return c == DocClass::Table || c == DocClass::Column; }
inline bool is_hint(DocClass c) { return !is_schema(c); }

struct Document {
  std::string id;
  DocClass cls = DocClass::Table;
  std::string content;
  std::size_t token_count = 0;
  std::uint64_t observed_count = 1;
  std::set<std::string> source_query_ids;
  std::set<std::string> subject_tables;

  // Structured keys used for relevance labeling.
  std::string table;                        // Table, Column
  std::string column;                       // Column
  std::set<std::string> join_tables;        // JoinHint
  std::set<std::string> join_conditions;    // JoinHint
  std::string predicate;                    // FilterHint
  std::vector<std::string> group_by;        // GroupByHint

  friend bool operator==(const Document&, const Document&) = default;
};

std::string table_doc_id(std::string_view table);
std::string column_doc_id(std::string_view table, std::string_view column);

// Table docs first (catalog order), then each table's column docs. Throws
// std::invalid_argument on an empty catalog.
std::vector<Document> build_schema_documents(const SchemaCatalog& catalog);

// Merges identical hints across queries: observed_count grows by each source
// record's observed_count and source ids are unioned. Output is sorted by
// class, then id. When `catalog` is given, subject_tables are limited to its
// tables.
std::vector<Document> build_hint_documents(const std::vector<sql::ParsedQuery>& queries,
                                           const SchemaCatalog* catalog = nullptr);

bool label_relevance(const Document& doc, const sql::QuerySubcomponents& query);

// Relevance of each document in `docs` to `query`, by position.
std::vector<bool> relevance_vector(const std::vector<Document>& docs, const sql::QuerySubcomponents& query);

}  // namespace tailorsql::docs
