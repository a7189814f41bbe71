#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tailorsql/diagnostics.hpp"
#include "tailorsql/sql/query_log.hpp"
#include "tailorsql/sql/subcomponents.hpp"

namespace tailorsql::eval {

struct QuestionSqlPair {
  std::string id;
  std::string question;
  std::string sql;

  friend bool operator==(const QuestionSqlPair&, const QuestionSqlPair&) = default;
};

// JSON lines {id, question, sql}. Malformed lines are skipped with a
// "pairs_invalid" diagnostic; repeated ids with "pairs_duplicate_id".
std::vector<QuestionSqlPair> read_pairs(std::string_view jsonl, Diagnostics& diagnostics);
std::string write_pairs(const std::vector<QuestionSqlPair>& pairs);

struct ParsedPair {
  QuestionSqlPair pair;
  sql::QuerySubcomponents subs;
};

// Drops pairs whose SQL does not parse ("lex_error" diagnostics).
std::vector<ParsedPair> parse_pairs(const std::vector<QuestionSqlPair>& pairs, Diagnostics& diagnostics);

enum class SplitMode { Random, Disjoint };
std::string_view to_string(SplitMode m);
std::optional<SplitMode> split_mode_from_string(std::string_view s);

struct EvalSplit {
  SplitMode mode = SplitMode::Random;
  std::vector<std::string> log_ids;
  std::vector<std::string> test_ids;
  std::uint64_t seed = 0;
};

// Random: each pair goes to the log with probability 1/2 (seeded). Disjoint:
// pairs sharing a table form connected components; components are assigned,
// largest first, to whichever side currently has fewer pairs. Throws
// std::invalid_argument for fewer than 2 pairs and DisjointImpossible when
// every pair lands in one component.
EvalSplit split_workload(const std::vector<ParsedPair>& pairs, SplitMode mode, std::uint64_t seed);

// Tables touched by the given side of a split.
std::set<std::string> split_tables(const std::vector<ParsedPair>& pairs, const std::vector<std::string>& ids);

// Log records for building a store from one side of a split; record ids are
// pair ids.
std::vector<sql::QueryRecord> log_records(const std::vector<ParsedPair>& pairs, const std::vector<std::string>& ids);

}  // namespace tailorsql::eval
