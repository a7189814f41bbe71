#pragma once

#include <set>
#include <string>
#include <vector>

#include "tailorsql/sql/ast.hpp"

namespace tailorsql::sql {

// A canonical predicate plus the base tables whose columns it references.
struct AnnotatedPredicate {
  std::string text;
  std::set<std::string> tables;

  friend auto operator<=>(const AnnotatedPredicate&, const AnnotatedPredicate&) = default;
};

// Clause-level structure of one query. All names are lowercase; tables are
// base tables, never aliases. Nested subqueries are merged in.
struct QuerySubcomponents {
  std::set<std::string> tables;
  std::set<std::string> join_conditions;
  std::vector<AnnotatedPredicate> filters;  // sorted by text, unique
  std::vector<std::string> group_by;        // sorted
  std::set<std::string> group_by_tables;
  std::set<std::string> columns;             // "table.column" (unquoted), resolved references
  std::set<std::string> unresolved_columns;  // bare column names that did not resolve
  bool unsupported = false;

  [[nodiscard]] bool has_filter(const std::string& canonical) const;
  friend bool operator==(const QuerySubcomponents&, const QuerySubcomponents&) = default;
};

QuerySubcomponents extract_subcomponents(const SqlAst& ast);

// Canonical SQL text of a whole statement: aliases resolved away, inner join
// conditions folded into WHERE, conjuncts and FROM items sorted. Two
// statements that differ only in aliasing, join syntax or predicate order
// render identically.
std::string canonical_sql(const SelectStatement& select);
std::string canonical_sql(const SqlAst& ast);

// Canonical text of the WHERE-clause filters with column qualifiers dropped,
// e.g. "x = 3" for "SELECT a FROM t WHERE t.x = 3".
std::vector<std::string> unqualified_filters(const SqlAst& ast);

}  // namespace tailorsql::sql
