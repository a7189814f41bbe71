#include "tailorsql/serve/extract.hpp"

#include <cctype>

#include "tailorsql/text.hpp"

namespace tailorsql::serve {

namespace {

bool word_byte(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool keyword_at(std::string_view s, std::size_t i, std::string_view kw) {
  if (i + kw.size() > s.size()) return false;
  if (i > 0 && word_byte(s[i - 1])) return false;
  if (i + kw.size() < s.size() && word_byte(s[i + kw.size()])) return false;
  return text::iequals(s.substr(i, kw.size()), kw);
}

bool at_line_start(std::string_view s, std::size_t i) {
  while (i > 0 && (s[i - 1] == ' ' || s[i - 1] == '\t')) --i;
  return i == 0 || s[i - 1] == '\n';
}

}  // namespace

ExtractedSql extract_sql(std::string_view response) {
  const auto fence = response.find("```");
  if (fence != std::string_view::npos) {
    auto body_start = response.find('\n', fence);
    body_start = body_start == std::string_view::npos ? response.size() : body_start + 1;
    const auto close = response.find("```", body_start);
    const auto body = text::trim(response.substr(body_start, close == std::string_view::npos ? std::string_view::npos
                                                                                              : close - body_start));
    if (!body.empty()) return {std::string(body), true};
  }
  for (std::size_t i = 0; i < response.size(); ++i) {
    if (keyword_at(response, i, "select") || (keyword_at(response, i, "with") && at_line_start(response, i))) {
      auto stmt = response.substr(i);
      const auto semi = stmt.find(';');
      if (semi != std::string_view::npos) stmt = stmt.substr(0, semi);
      return {std::string(text::trim(stmt)), true};
    }
  }
  return {std::string(response), false};
}

}  // namespace tailorsql::serve
