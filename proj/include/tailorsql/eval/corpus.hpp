#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tailorsql/eval/split.hpp"

namespace tailorsql::eval {

// Synthetic workload with two kinds of tables: entity tables with plain
// English names, and link tables with made-up names that join two entities.
// Questions mention only entity words, so a link table is hard to find from
// its raw text alone. Link popularity follows a Zipf law, which makes join
// paths repeat across the log.
struct CorpusConfig {
  std::size_t entity_tables = 25;
  std::size_t link_tables = 25;
  std::size_t log_queries = 200;
  std::size_t test_pairs = 100;
  double join_share = 0.7;     // fraction of questions that go through a link table
  double zipf_exponent = 1.1;
  std::size_t malformed = 0;   // unbalanced-quote statements mixed into the log
  std::uint64_t seed = 7;
};

struct Corpus {
  std::string schema_sql;
  nlohmann::json stats;
  std::vector<QuestionSqlPair> log;   // logged questions with their SQL
  std::vector<QuestionSqlPair> test;
  std::vector<std::string> malformed;  // statements that fail to lex
  std::vector<std::string> entity_names;
  std::vector<std::string> link_names;

  // One statement per line, malformed statements interleaved deterministically.
  [[nodiscard]] std::string log_text() const;
};

Corpus generate_corpus(const CorpusConfig& config);

}  // namespace tailorsql::eval
