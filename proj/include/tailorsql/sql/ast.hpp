#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tailorsql::sql {

struct SelectStatement;
using SelectPtr = std::shared_ptr<const SelectStatement>;

enum class ExprKind {
  Column,      // qualifier.name; qualifier may be empty
  Literal,     // text is the literal verbatim ('abc', 42, null, date '2020-01-01')
  Star,        // * or qualifier.*
  Parameter,
  Unary,       // op in {"-", "+", "~", "not"}
  Binary,      // arithmetic, comparison, like, and, or
  Function,    // name(args); distinct flag for aggregates
  Between,     // args = {value, low, high}
  InList,      // args = {value, items...}
  InSubquery,  // args = {value}; subquery set
  IsNull,      // args = {value}; op is "null", "true" or "false"
  Exists,      // subquery set
  Subquery,    // scalar subquery
  Case,        // args = {operand?, when, then, ..., else?}
  Cast,        // args = {value}; op holds the target type
};

struct Expr {
  ExprKind kind = ExprKind::Literal;
  std::string op;         // operator, function name, literal text or column name
  std::string qualifier;  // column / star qualifier, lowercased
  std::vector<Expr> args;
  SelectPtr subquery;
  bool negated = false;
  bool distinct = false;
  bool has_operand = false;  // Case only
  bool has_else = false;     // Case only

  friend bool operator==(const Expr& a, const Expr& b);
};

enum class JoinKind { Comma, Inner, Left, Right, Full, Cross };

struct TableRef {
  std::string name;   // base table name, lowercased; empty for derived tables
  std::string alias;  // lowercased; empty when absent
  SelectPtr derived;
  JoinKind join = JoinKind::Comma;  // how this item attaches to the items before it
  std::optional<Expr> on;
  std::vector<std::string> using_columns;

  [[nodiscard]] const std::string& binding_name() const { return alias.empty() ? name : alias; }
  friend bool operator==(const TableRef& a, const TableRef& b);
};

struct SelectItem {
  Expr expr;
  std::string alias;
  friend bool operator==(const SelectItem&, const SelectItem&) = default;
};

struct OrderItem {
  Expr expr;
  bool descending = false;
  friend bool operator==(const OrderItem&, const OrderItem&) = default;
};

struct SetOperation {
  std::string op;  // "union", "union all", "intersect", "except"
  SelectPtr select;
};

struct CommonTable {
  std::string name;
  SelectPtr select;
};

struct SelectStatement {
  bool distinct = false;
  std::vector<CommonTable> with;
  std::vector<SelectItem> items;
  std::vector<TableRef> from;
  std::optional<Expr> where;
  std::vector<Expr> group_by;
  std::optional<Expr> having;
  std::vector<OrderItem> order_by;
  std::string limit;
  std::vector<SetOperation> set_operations;

  friend bool operator==(const SelectStatement& a, const SelectStatement& b);
};

// Result of parsing one statement. Constructs outside the supported subset do
// not fail the parse; they set `unsupported` and are skipped.
struct SqlAst {
  SelectPtr select;  // null for non-SELECT statements
  bool unsupported = false;
  std::vector<std::string> unsupported_reasons;
};

bool operator==(const SqlAst& a, const SqlAst& b);

// Builders used by parser and tests.
Expr make_column(std::string qualifier, std::string name);
Expr make_literal(std::string text);
Expr make_binary(std::string op, Expr lhs, Expr rhs);

}  // namespace tailorsql::sql
