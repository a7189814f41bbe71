#include "tailorsql/sql/render.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <vector>

#include "tailorsql/errors.hpp"
#include "tailorsql/sql/lexer.hpp"
#include "tailorsql/sql/parser.hpp"
#include "tailorsql/sql/subcomponents.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::sql {

namespace {

enum Precedence : int {
  kOr = 1,
  kAnd = 2,
  kNot = 3,
  kComparison = 4,
  kAdditive = 5,
  kMultiplicative = 6,
  kUnary = 7,
  kPrimary = 8,
};

bool is_comparison_op(std::string_view op) {
  return op == "=" || op == "<>" || op == "<" || op == ">" || op == "<=" || op == ">=";
}
bool is_additive_op(std::string_view op) {
  return op == "+" || op == "-" || op == "||" || op == "&" || op == "|" || op == "^";
}
bool is_multiplicative_op(std::string_view op) { return op == "*" || op == "/" || op == "%"; }

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Binary:
      if (e.op == "or") return kOr;
      if (e.op == "and") return kAnd;
      if (is_additive_op(e.op)) return kAdditive;
      if (is_multiplicative_op(e.op)) return kMultiplicative;
      if (e.op == "escape") return kAdditive;
      return kComparison;
    case ExprKind::Unary:
      return e.op == "not" ? kNot : kUnary;
    case ExprKind::Between:
    case ExprKind::InList:
    case ExprKind::InSubquery:
    case ExprKind::IsNull:
      return kComparison;
    default:
      return kPrimary;
  }
}

// Literals sort after everything else so "x = 3" keeps its written shape;
// otherwise operands compare by rendered text.
bool operand_order(const Expr& a, const std::string& a_text, const Expr& b, const std::string& b_text) {
  const bool a_lit = a.kind == ExprKind::Literal || a.kind == ExprKind::Parameter;
  const bool b_lit = b.kind == ExprKind::Literal || b.kind == ExprKind::Parameter;
  if (a_lit != b_lit) return b_lit;
  return a_text < b_text;
}

class Renderer {
 public:
  explicit Renderer(const RenderContext& ctx) : ctx_(ctx) {}

  std::string operator()(const Expr& e) const { return render(e); }

 private:
  std::string wrap(const Expr& e, int min_precedence) const {
    auto s = render(e);
    return precedence(e) < min_precedence ? "(" + s + ")" : s;
  }

  void flatten(const Expr& e, std::string_view op, std::vector<std::string>& out, int min_precedence) const {
    if (e.kind == ExprKind::Binary && e.op == op) {
      flatten(e.args[0], op, out, min_precedence);
      flatten(e.args[1], op, out, min_precedence);
    } else {
      out.push_back(wrap(e, min_precedence));
    }
  }

  std::string render(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Column:
        return ctx_.column(e);
      case ExprKind::Literal:
      case ExprKind::Parameter:
        return e.op;
      case ExprKind::Star:
        return e.qualifier.empty() ? "*" : render_identifier(e.qualifier) + ".*";
      case ExprKind::Unary:
        if (e.op == "not") return "not " + wrap(e.args[0], kNot);
        {
          auto operand = wrap(e.args[0], kUnary);
          if (!operand.empty() && (operand.front() == '-' || operand.front() == '+')) operand = "(" + operand + ")";
          return e.op + operand;
        }
      case ExprKind::Binary:
        return render_binary(e);
      case ExprKind::Function: {
        std::vector<std::string> args;
        for (const auto& a : e.args) args.push_back(render(a));
        if (e.op == "row") return "(" + text::join(args, ", ") + ")";
        return render_identifier(e.op) + "(" + (e.distinct ? "distinct " : "") + text::join(args, ", ") + ")";
      }
      case ExprKind::Between:
        return wrap(e.args[0], kAdditive) + (e.negated ? " not between " : " between ") + wrap(e.args[1], kAdditive) +
               " and " + wrap(e.args[2], kAdditive);
      case ExprKind::InList: {
        std::vector<std::string> items;
        for (std::size_t i = 1; i < e.args.size(); ++i) items.push_back(render(e.args[i]));
        return wrap(e.args[0], kAdditive) + (e.negated ? " not in (" : " in (") + text::join(items, ", ") + ")";
      }
      case ExprKind::InSubquery:
        return wrap(e.args[0], kAdditive) + (e.negated ? " not in (" : " in (") + ctx_.subquery(*e.subquery) + ")";
      case ExprKind::IsNull:
        return wrap(e.args[0], kAdditive) + (e.negated ? " is not " : " is ") + e.op;
      case ExprKind::Exists:
        return std::string(e.negated ? "not exists (" : "exists (") + ctx_.subquery(*e.subquery) + ")";
      case ExprKind::Subquery:
        if (!e.subquery) return e.args.empty() ? "()" : "(" + render(e.args[0]) + ")";
        return "(" + ctx_.subquery(*e.subquery) + ")";
      case ExprKind::Case: {
        std::string out = "case";
        std::size_t i = 0;
        if (e.has_operand) out += " " + render(e.args[i++]);
        const std::size_t pairs_end = e.has_else ? e.args.size() - 1 : e.args.size();
        for (; i + 2 <= pairs_end; i += 2) {
          out += " when " + render(e.args[i]) + " then " + render(e.args[i + 1]);
        }
        if (e.has_else) out += " else " + render(e.args.back());
        return out + " end";
      }
      case ExprKind::Cast:
        return "cast(" + render(e.args[0]) + " as " + e.op + ")";
    }
    return {};
  }

  std::string render_binary(const Expr& e) const {
    if (e.op == "and" || e.op == "or") {
      std::vector<std::string> parts;
      flatten(e, e.op, parts, e.op == "and" ? kNot : kAnd);
      std::sort(parts.begin(), parts.end());
      return text::join(parts, e.op == "and" ? " and " : " or ");
    }
    if (is_comparison_op(e.op)) {
      auto l = wrap(e.args[0], kAdditive);
      auto r = wrap(e.args[1], kAdditive);
      if ((e.op == "=" || e.op == "<>") && operand_order(e.args[1], r, e.args[0], l)) std::swap(l, r);
      return l + " " + e.op + " " + r;
    }
    if (is_additive_op(e.op) || is_multiplicative_op(e.op)) {
      const int p = precedence(e);
      auto l = wrap(e.args[0], p);
      auto r = wrap(e.args[1], p + 1);
      if (!r.empty() && (r.front() == '-' || r.front() == '+' || r.front() == '*')) r = "(" + r + ")";
      return l + e.op + r;
    }
    if (e.op == "escape") return wrap(e.args[0], kAdditive) + " escape " + wrap(e.args[1], kAdditive);
    if (e.op == "like" || e.op == "ilike") {
      return wrap(e.args[0], kAdditive) + (e.negated ? " not " : " ") + e.op + " " + wrap(e.args[1], kAdditive);
    }
    return wrap(e.args[0], kAdditive) + " " + e.op + " " + wrap(e.args[1], kAdditive);
  }

  const RenderContext& ctx_;
};

std::string fallback_canonical(std::string_view component) {
  // Lex leniently: keep string literals intact, lowercase everything else.
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < component.size()) {
    const auto c = static_cast<unsigned char>(component[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      while (j < component.size()) {
        if (component[j] == '\'') {
          if (j + 1 < component.size() && component[j + 1] == '\'') {
            j += 2;
            continue;
          }
          ++j;
          break;
        }
        ++j;
      }
      parts.emplace_back(component.substr(i, j - i));
      i = j;
      continue;
    }
    std::size_t j = i;
    while (j < component.size() && !std::isspace(static_cast<unsigned char>(component[j])) && component[j] != '\'') ++j;
    parts.push_back(text::to_lower(component.substr(i, j - i)));
    i = j;
  }
  return text::join(parts, " ");
}

}  // namespace

std::string RenderContext::column(const Expr& column) const {
  if (column.qualifier.empty()) return render_identifier(column.op);
  return render_identifier(column.qualifier) + "." + render_identifier(column.op);
}

std::string RenderContext::subquery(const SelectStatement& select) const { return canonical_sql(select); }

std::string render_expression(const Expr& e, const RenderContext& ctx) { return Renderer(ctx)(e); }

std::string render_expression(const Expr& e) {
  const RenderContext ctx;
  return render_expression(e, ctx);
}

std::string render_identifier(std::string_view name) {
  bool plain = !name.empty() && !std::isdigit(static_cast<unsigned char>(name.front()));
  for (unsigned char c : name) {
    if (!(std::islower(c) || std::isdigit(c) || c == '_' || c == '$' || c >= 0x80)) {
      plain = false;
      break;
    }
  }
  if (plain && !is_reserved_word(name)) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string canonicalize(std::string_view component) {
  try {
    return render_expression(parse_expression(component));
  } catch (const LexError&) {
  } catch (const std::invalid_argument&) {
  }
  return fallback_canonical(component);
}

}  // namespace tailorsql::sql
