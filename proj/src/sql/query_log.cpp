#include "tailorsql/sql/query_log.hpp"

#include <cctype>
#include <map>

#include "tailorsql/errors.hpp"
#include "tailorsql/sql/parser.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::sql {

std::vector<std::string_view> split_sql_statements(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\'' || c == '"' || c == '`') {
      const std::size_t close = s.find(c, i + 1);
      i = close == std::string_view::npos ? s.size() : close + 1;
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      const std::size_t nl = s.find('\n', i);
      i = nl == std::string_view::npos ? s.size() : nl + 1;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      const std::size_t close = s.find("*/", i + 2);
      i = close == std::string_view::npos ? s.size() : close + 2;
    } else if (c == ';') {
      out.push_back(s.substr(start, i - start));
      start = ++i;
    } else {
      ++i;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

namespace {

bool is_comment_line(std::string_view line) { return line.substr(0, 2) == "--"; }

// Strips an optional "<count>\t" prefix.
std::uint64_t take_count(std::string_view& stmt) {
  std::size_t i = 0;
  while (i < stmt.size() && std::isdigit(static_cast<unsigned char>(stmt[i]))) ++i;
  if (i == 0 || i >= stmt.size() || stmt[i] != '\t' || i > 18) return 1;
  const auto n = std::stoull(std::string(stmt.substr(0, i)));
  stmt = text::trim(stmt.substr(i + 1));
  return n == 0 ? 1 : n;
}

bool opens_statement(std::string_view line) {
  static const char* const kStarters[] = {"select", "with", "insert", "update", "delete", "create",
                                          "drop",   "alter", "explain", "values", "("};
  for (const char* kw : kStarters) {
    if (text::istarts_with(line, kw)) return true;
  }
  return false;
}

}  // namespace

std::vector<QueryRecord> parse_query_log(std::string_view content) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= content.size()) {
      std::size_t nl = content.find('\n', start);
      if (nl == std::string_view::npos) nl = content.size();
      auto line = text::trim(content.substr(start, nl - start));
      if (!line.empty() && !is_comment_line(line)) lines.push_back(line);
      start = nl + 1;
    }
  }
  // Statements spanning lines show up as lines that do not open a statement.
  bool multiline = false;
  for (auto line : lines) {
    take_count(line);
    if (!opens_statement(line)) multiline = true;
  }
  const bool has_semicolon = split_sql_statements(content).size() > 1;

  std::vector<std::string_view> statements;
  if (multiline && has_semicolon) {
    for (auto stmt : split_sql_statements(content)) {
      // Drop comment lines in front of the statement.
      stmt = text::trim(stmt);
      while (is_comment_line(stmt)) {
        const std::size_t nl = stmt.find('\n');
        stmt = nl == std::string_view::npos ? std::string_view() : text::trim(stmt.substr(nl + 1));
      }
      if (!stmt.empty()) statements.push_back(stmt);
    }
  } else {
    for (auto line : lines) {
      while (!line.empty() && line.back() == ';') line = text::trim(line.substr(0, line.size() - 1));
      if (!line.empty()) statements.push_back(line);
    }
  }

  std::vector<QueryRecord> out;
  std::map<std::string, std::size_t> index;
  std::size_t position = 0;
  for (auto stmt : statements) {
    ++position;
    const auto count = take_count(stmt);
    if (stmt.empty()) continue;
    std::string key(stmt);
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      out.push_back({"q" + std::to_string(position), std::move(key), count});
    } else {
      out[it->second].observed_count += count;
    }
  }
  return out;
}

std::vector<ParsedQuery> parse_workload(const std::vector<QueryRecord>& records, Diagnostics& diagnostics) {
  std::vector<ParsedQuery> out;
  out.reserve(records.size());
  for (const auto& record : records) {
    try {
      const auto ast = parse_sql(record.text);
      if (ast.unsupported) {
        diagnostics.add("unsupported", record.id, text::join(ast.unsupported_reasons, "; "));
      }
      out.push_back({record, extract_subcomponents(ast)});
    } catch (const LexError& e) {
      diagnostics.add("lex_error", record.id, e.what());
    } catch (const std::invalid_argument& e) {
      diagnostics.add("lex_error", record.id, e.what());
    }
  }
  return out;
}

}  // namespace tailorsql::sql
