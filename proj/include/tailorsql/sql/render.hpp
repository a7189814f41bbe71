#pragma once

#include <string>
#include <string_view>

#include "tailorsql/sql/ast.hpp"

namespace tailorsql::sql {

// Hooks for the parts of rendering that depend on name resolution.
class RenderContext {
 public:
  virtual ~RenderContext() = default;
  // Default: "qualifier.name" as written (lowercased).
  [[nodiscard]] virtual std::string column(const Expr& column) const;
  // Default: canonical SQL of the statement without scope information.
  [[nodiscard]] virtual std::string subquery(const SelectStatement& select) const;
};

// Canonical text of an expression: lowercase identifiers and keywords,
// literals verbatim, comparison/boolean operators single-spaced, arithmetic
// unspaced, operands of = and <> sorted, AND / OR operand lists sorted.
std::string render_expression(const Expr& e, const RenderContext& ctx);
std::string render_expression(const Expr& e);

// Quotes an identifier only when it would not re-lex as a plain word.
std::string render_identifier(std::string_view lowercase_name);

// Canonical form of a raw subcomponent string. Idempotent. Text that does not
// parse as an expression falls back to lowercased, single-spaced tokens with
// literals untouched.
std::string canonicalize(std::string_view component);

}  // namespace tailorsql::sql
