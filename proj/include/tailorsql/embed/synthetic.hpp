#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tailorsql/diagnostics.hpp"
#include "tailorsql/docs/catalog.hpp"
#include "tailorsql/embed/provider.hpp"
#include "tailorsql/sql/query_log.hpp"

namespace tailorsql::embed {

inline constexpr std::string_view kSyntheticQuestionHeader =
    "Write the natural-language question a user would ask to get the following SQL query.";

struct SyntheticQuestion {
  std::string query_id;
  std::string text;

  friend bool operator==(const SyntheticQuestion&, const SyntheticQuestion&) = default;
};

// Prompt with the CREATE TABLE text of the query's tables and the SQL itself.
std::string synthetic_question_prompt(const sql::ParsedQuery& query, const docs::SchemaCatalog& catalog);

// The question the mock provider derives from a SQL statement: "Which rows of
// <tables> satisfy <filters>?" with tables sorted and filters unqualified.
// Without filters: "Which rows of <tables> are needed?".
std::string template_question(std::string_view sql);

// Returns nullopt with a diagnostic when the provider stays unavailable after
// retries or answers with an empty string.
std::optional<SyntheticQuestion> generate_synthetic_question(const sql::ParsedQuery& query,
                                                             const docs::SchemaCatalog& catalog,
                                                             GenerativeProvider& provider, Diagnostics& diagnostics,
                                                             const RetryPolicy& retry = {});

}  // namespace tailorsql::embed
