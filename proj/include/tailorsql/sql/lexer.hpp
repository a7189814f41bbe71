#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tailorsql::sql {

enum class TokenKind {
  Identifier,        // bare word, keywords included
  QuotedIdentifier,  // "x" or `x`; text holds the unquoted name
  Number,
  String,            // text holds the literal verbatim, quotes included
  Operator,
  LParen,
  RParen,
  Comma,
  Dot,
  Semicolon,
  Parameter,         // ?, $1, :name
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t offset = 0;
};

// Throws LexError on unterminated strings / quoted identifiers / block
// comments and on unbalanced parentheses. The trailing token is always End.
std::vector<Token> tokenize(std::string_view sql);

bool is_keyword(const Token& t, std::string_view keyword);

}  // namespace tailorsql::sql
