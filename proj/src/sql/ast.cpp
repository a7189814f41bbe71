#include "tailorsql/sql/ast.hpp"

namespace tailorsql::sql {

namespace {

bool same_select(const SelectPtr& a, const SelectPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.op == b.op && a.qualifier == b.qualifier && a.negated == b.negated &&
         a.distinct == b.distinct && a.has_operand == b.has_operand && a.has_else == b.has_else &&
         a.args == b.args && same_select(a.subquery, b.subquery);
}

bool operator==(const TableRef& a, const TableRef& b) {
  return a.name == b.name && a.alias == b.alias && a.join == b.join && a.on == b.on &&
         a.using_columns == b.using_columns && same_select(a.derived, b.derived);
}

bool operator==(const SelectStatement& a, const SelectStatement& b) {
  if (a.with.size() != b.with.size() || a.set_operations.size() != b.set_operations.size()) return false;
  for (std::size_t i = 0; i < a.with.size(); ++i) {
    if (a.with[i].name != b.with[i].name || !same_select(a.with[i].select, b.with[i].select)) return false;
  }
  for (std::size_t i = 0; i < a.set_operations.size(); ++i) {
    if (a.set_operations[i].op != b.set_operations[i].op ||
        !same_select(a.set_operations[i].select, b.set_operations[i].select)) {
      return false;
    }
  }
  return a.distinct == b.distinct && a.items == b.items && a.from == b.from && a.where == b.where &&
         a.group_by == b.group_by && a.having == b.having && a.order_by == b.order_by && a.limit == b.limit;
}

bool operator==(const SqlAst& a, const SqlAst& b) {
  return a.unsupported == b.unsupported && same_select(a.select, b.select);
}

Expr make_column(std::string qualifier, std::string name) {
  Expr e;
  e.kind = ExprKind::Column;
  e.qualifier = std::move(qualifier);
  e.op = std::move(name);
  return e;
}

Expr make_literal(std::string text) {
  Expr e;
  e.kind = ExprKind::Literal;
  e.op = std::move(text);
  return e;
}

Expr make_binary(std::string op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.op = std::move(op);
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

}  // namespace tailorsql::sql
