#pragma once

#include <string_view>

#include "tailorsql/sql/ast.hpp"

namespace tailorsql::sql {

// Parses one SQL statement. Supported: SELECT with JOIN ... ON / USING or
// comma joins, WHERE, GROUP BY, HAVING, ORDER BY, LIMIT, set operations,
// subqueries in FROM and in expressions. Anything else (window functions,
// non-SELECT statements, unparseable clauses) sets `unsupported` and is
// skipped. Throws LexError for unbalanced quotes or parentheses.
SqlAst parse_sql(std::string_view text);

// Parses a standalone expression such as "t1.a = t2.b AND x > 3". Throws
// LexError, or std::invalid_argument when the text is not an expression.
Expr parse_expression(std::string_view text);

bool is_reserved_word(std::string_view lowercase_word);

}  // namespace tailorsql::sql
