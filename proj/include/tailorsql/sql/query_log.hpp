#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tailorsql/diagnostics.hpp"
#include "tailorsql/sql/subcomponents.hpp"

namespace tailorsql::sql {

// Splits on ';' outside string literals, quoted identifiers and comments.
// Pieces are returned untrimmed; the last piece follows the final ';'.
std::vector<std::string_view> split_sql_statements(std::string_view sql);

struct QueryRecord {
  std::string id;
  std::string text;
  std::uint64_t observed_count = 1;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

// Splits a log into statements. The format is auto-detected: if any statement
// spans several lines the log is split on ';' (outside quotes and comments),
// otherwise every non-empty line is one statement. A leading "<count>\t" seeds
// observed_count. Identical statements collapse into the first occurrence,
// whose id is "q<N>" with N the 1-based statement position.
std::vector<QueryRecord> parse_query_log(std::string_view content);

struct ParsedQuery {
  QueryRecord record;
  QuerySubcomponents subs;
};

// Parses every record. Statements that fail to lex are dropped with a
// "lex_error" diagnostic; partially supported ones are kept and noted as
// "unsupported".
std::vector<ParsedQuery> parse_workload(const std::vector<QueryRecord>& records, Diagnostics& diagnostics);

}  // namespace tailorsql::sql
