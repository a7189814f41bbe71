#include "tailorsql/sql/lexer.hpp"

#include <cctype>

#include "tailorsql/errors.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::sql {

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) != 0 || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return ident_start(c) || std::isdigit(c) != 0 || c == '$'; }

}  // namespace

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  int depth = 0;
  std::size_t i = 0;
  const std::size_t n = sql.size();

  auto push = [&](TokenKind kind, std::string text, std::size_t at) {
    out.push_back({kind, std::move(text), at});
  };

  while (i < n) {
    const auto c = static_cast<unsigned char>(sql[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      const auto end = sql.find("*/", i + 2);
      if (end == std::string_view::npos) throw LexError("unterminated block comment at offset " + std::to_string(i));
      i = end + 2;
      continue;
    }
    const std::size_t start = i;
    if (c == '\'') {
      ++i;
      for (;;) {
        if (i >= n) throw LexError("unterminated string literal at offset " + std::to_string(start));
        if (sql[i] == '\'') {
          if (i + 1 < n && sql[i + 1] == '\'') {
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        ++i;
      }
      push(TokenKind::String, std::string(sql.substr(start, i - start)), start);
      continue;
    }
    if (c == '"' || c == '`') {
      const char q = static_cast<char>(c);
      std::string name;
      ++i;
      for (;;) {
        if (i >= n) throw LexError("unterminated quoted identifier at offset " + std::to_string(start));
        if (sql[i] == q) {
          if (i + 1 < n && sql[i + 1] == q) {
            name.push_back(q);
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        name.push_back(sql[i++]);
      }
      push(TokenKind::QuotedIdentifier, std::move(name), start);
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
      if (i < n && sql[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
      }
      if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
        }
      }
      push(TokenKind::Number, std::string(sql.substr(start, i - start)), start);
      continue;
    }
    if (ident_start(c)) {
      while (i < n && ident_char(static_cast<unsigned char>(sql[i]))) ++i;
      push(TokenKind::Identifier, std::string(sql.substr(start, i - start)), start);
      continue;
    }
    switch (c) {
      case '(':
        ++depth;
        push(TokenKind::LParen, "(", start);
        ++i;
        continue;
      case ')':
        if (--depth < 0) throw LexError("unbalanced ')' at offset " + std::to_string(start));
        push(TokenKind::RParen, ")", start);
        ++i;
        continue;
      case ',':
        push(TokenKind::Comma, ",", start);
        ++i;
        continue;
      case '.':
        push(TokenKind::Dot, ".", start);
        ++i;
        continue;
      case ';':
        push(TokenKind::Semicolon, ";", start);
        ++i;
        continue;
      case '?':
        push(TokenKind::Parameter, "?", start);
        ++i;
        continue;
      default:
        break;
    }
    if ((c == '$' || c == ':') && i + 1 < n && ident_char(static_cast<unsigned char>(sql[i + 1])) &&
        !(c == ':' && sql[i + 1] == ':')) {
      ++i;
      while (i < n && ident_char(static_cast<unsigned char>(sql[i]))) ++i;
      push(TokenKind::Parameter, std::string(sql.substr(start, i - start)), start);
      continue;
    }
    static constexpr std::string_view two_char_ops[] = {"<=", ">=", "<>", "!=", "||", "::", "=="};
    bool matched = false;
    if (i + 1 < n) {
      const auto pair = sql.substr(i, 2);
      for (auto op : two_char_ops) {
        if (pair == op) {
          push(TokenKind::Operator, std::string(op == "==" ? "=" : op), start);
          i += 2;
          matched = true;
          break;
        }
      }
    }
    if (matched) continue;
    push(TokenKind::Operator, std::string(1, static_cast<char>(c)), start);
    ++i;
  }
  if (depth != 0) throw LexError("unbalanced '(': " + std::to_string(depth) + " left open");
  out.push_back({TokenKind::End, "", n});
  return out;
}

bool is_keyword(const Token& t, std::string_view keyword) {
  return t.kind == TokenKind::Identifier && text::iequals(t.text, keyword);
}

}  // namespace tailorsql::sql
