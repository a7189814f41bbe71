#include "tailorsql/embed/synthetic.hpp"

#include "tailorsql/errors.hpp"
#include "tailorsql/sql/parser.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::embed {

std::string synthetic_question_prompt(const sql::ParsedQuery& query, const docs::SchemaCatalog& catalog) {
  std::string out(kSyntheticQuestionHeader);
  out += "\nSchema:\n";
  for (const auto& t : query.subs.tables) {
    if (const auto* info = catalog.find(t)) out += info->create_sql + "\n";
  }
  out += "SQL:\n" + query.record.text + "\nQuestion:\n";
  return out;
}

std::string template_question(std::string_view sql_text) {
  std::vector<std::string> tables;
  std::vector<std::string> filters;
  try {
    const auto ast = sql::parse_sql(sql_text);
    const auto subs = sql::extract_subcomponents(ast);
    tables.assign(subs.tables.begin(), subs.tables.end());
    filters = sql::unqualified_filters(ast);
  } catch (const Error&) {
  } catch (const std::invalid_argument&) {
  }
  const std::string subject = tables.empty() ? std::string("the database") : text::join(tables, ", ");
  if (filters.empty()) return "Which rows of " + subject + " are needed?";
  return "Which rows of " + subject + " satisfy " + text::join(filters, " and ") + "?";
}

std::optional<SyntheticQuestion> generate_synthetic_question(const sql::ParsedQuery& query,
                                                             const docs::SchemaCatalog& catalog,
                                                             GenerativeProvider& provider, Diagnostics& diagnostics,
                                                             const RetryPolicy& retry) {
  const auto prompt = synthetic_question_prompt(query, catalog);
  std::string answer;
  try {
    answer = with_retry(retry, [&] { return provider.generate(prompt); });
  } catch (const ProviderUnavailable& e) {
    diagnostics.add("provider_unavailable", query.record.id, e.what());
    return std::nullopt;
  }
  const auto trimmed = text::trim(answer);
  if (trimmed.empty()) {
    diagnostics.add("empty_question", query.record.id, "provider returned an empty question");
    return std::nullopt;
  }
  return SyntheticQuestion{query.record.id, std::string(trimmed)};
}

}  // namespace tailorsql::embed
