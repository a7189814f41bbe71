#include "tailorsql/sql/parser.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "tailorsql/errors.hpp"
#include "tailorsql/sql/lexer.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::sql {

namespace {

constexpr std::array<std::string_view, 52> kReserved = {
    "select", "from",   "where",  "group",   "by",       "having",    "order",  "limit",   "offset",
    "fetch",  "join",   "inner",  "left",    "right",    "full",      "outer",  "cross",   "natural",
    "on",     "using",  "union",  "intersect", "except", "as",        "and",    "or",      "not",
    "in",     "is",     "like",   "ilike",   "between",  "case",      "when",   "then",    "else",
    "end",    "exists", "null",   "true",    "false",    "distinct",  "all",    "with",    "window",
    "over",   "asc",    "desc",   "into",    "lateral",  "qualify",   "escape"};

constexpr std::array<std::string_view, 9> kClauseKeywords = {
    "from", "where", "group", "having", "order", "limit", "union", "intersect", "except"};

struct SyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_comparison(std::string_view op) {
  return op == "=" || op == "<>" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=";
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<std::string>& reasons)
      : toks_(std::move(tokens)), reasons_(reasons) {}

  SqlAst parse_statement() {
    SqlAst ast;
    const Token& first = peek();
    if (!(is_keyword(first, "select") || is_keyword(first, "with") || first.kind == TokenKind::LParen)) {
      ast.unsupported = true;
      reasons_.push_back("statement kind '" + text::to_lower(first.text) + "' is not a query");
      return ast;
    }
    ast.select = parse_query();
    while (peek().kind == TokenKind::Semicolon) next();
    if (peek().kind != TokenKind::End) {
      reasons_.push_back("trailing tokens after statement at offset " + std::to_string(peek().offset));
    }
    ast.unsupported = !reasons_.empty();
    return ast;
  }

  Expr parse_standalone_expression() {
    Expr e = parse_expr();
    while (peek().kind == TokenKind::Semicolon) next();
    if (peek().kind != TokenKind::End) throw SyntaxError("trailing tokens after expression");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    const std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_kw(std::string_view kw, std::size_t k = 0) const { return is_keyword(peek(k), kw); }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    next();
    return true;
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) throw SyntaxError("expected '" + std::string(kw) + "' near offset " + std::to_string(peek().offset));
  }
  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }
  void expect(TokenKind kind, std::string_view what) {
    if (!accept(kind)) throw SyntaxError("expected " + std::string(what) + " near offset " + std::to_string(peek().offset));
  }
  bool at_op(std::string_view op, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Operator && peek(k).text == op;
  }
  bool at_query_start(std::size_t k = 0) const { return at_kw("select", k) || at_kw("with", k); }

  bool at_clause_boundary() const {
    const Token& t = peek();
    if (t.kind == TokenKind::End || t.kind == TokenKind::Semicolon || t.kind == TokenKind::RParen) return true;
    if (t.kind != TokenKind::Identifier) return false;
    const auto w = text::to_lower(t.text);
    return std::find(kClauseKeywords.begin(), kClauseKeywords.end(), w) != kClauseKeywords.end();
  }

  // Skips tokens of a clause that failed to parse, stopping before the next
  // clause keyword at the current nesting level.
  void recover(const std::string& why) {
    reasons_.push_back(why);
    int depth = 0;
    while (peek().kind != TokenKind::End) {
      if (depth == 0 && at_clause_boundary()) return;
      if (peek().kind == TokenKind::LParen) ++depth;
      if (peek().kind == TokenKind::RParen) --depth;
      next();
    }
  }

  void skip_balanced_parens() {
    expect(TokenKind::LParen, "'('");
    int depth = 1;
    while (depth > 0 && peek().kind != TokenKind::End) {
      if (peek().kind == TokenKind::LParen) ++depth;
      if (peek().kind == TokenKind::RParen) --depth;
      next();
    }
  }

  std::string parse_identifier(std::string_view what) {
    const Token& t = peek();
    if (t.kind == TokenKind::QuotedIdentifier) return text::to_lower(next().text);
    if (t.kind == TokenKind::Identifier && !is_reserved_word(text::to_lower(t.text))) return text::to_lower(next().text);
    throw SyntaxError("expected " + std::string(what) + " near offset " + std::to_string(t.offset));
  }

  std::string parse_optional_alias() {
    if (accept_kw("as")) return parse_identifier("alias");
    const Token& t = peek();
    if (t.kind == TokenKind::QuotedIdentifier) return text::to_lower(next().text);
    if (t.kind == TokenKind::Identifier && !is_reserved_word(text::to_lower(t.text))) return text::to_lower(next().text);
    return {};
  }

  // ---------------------------------------------------------------- queries

  SelectPtr parse_query() {
    auto stmt = std::make_shared<SelectStatement>();
    if (accept_kw("with")) {
      reasons_.push_back("common table expression");
      accept_kw("recursive");
      do {
        CommonTable cte;
        cte.name = parse_identifier("common table name");
        if (peek().kind == TokenKind::LParen) skip_balanced_parens();
        expect_kw("as");
        expect(TokenKind::LParen, "'('");
        cte.select = parse_query();
        expect(TokenKind::RParen, "')'");
        stmt->with.push_back(std::move(cte));
      } while (accept(TokenKind::Comma));
    }
    if (peek().kind == TokenKind::LParen && (at_query_start(1) || peek(1).kind == TokenKind::LParen)) {
      next();
      auto inner = parse_query();
      expect(TokenKind::RParen, "')'");
      auto merged = std::make_shared<SelectStatement>(*inner);
      merged->with.insert(merged->with.begin(), stmt->with.begin(), stmt->with.end());
      stmt = std::move(merged);
    } else {
      parse_select_body(*stmt);
    }
    for (;;) {
      std::string op;
      if (accept_kw("union")) {
        op = accept_kw("all") ? "union all" : "union";
        accept_kw("distinct");
      } else if (accept_kw("intersect")) {
        op = "intersect";
        accept_kw("all");
      } else if (accept_kw("except")) {
        op = "except";
        accept_kw("all");
      } else {
        break;
      }
      SelectPtr rhs;
      if (peek().kind == TokenKind::LParen) {
        next();
        rhs = parse_query();
        expect(TokenKind::RParen, "')'");
      } else {
        auto s = std::make_shared<SelectStatement>();
        parse_select_body(*s);
        rhs = std::move(s);
      }
      stmt->set_operations.push_back({op, std::move(rhs)});
    }
    return stmt;
  }

  void parse_select_body(SelectStatement& stmt) {
    expect_kw("select");
    if (accept_kw("distinct")) {
      stmt.distinct = true;
      if (accept_kw("on")) {
        reasons_.push_back("distinct on");
        skip_balanced_parens();
      }
    } else {
      accept_kw("all");
    }
    if (at_kw("top")) {
      reasons_.push_back("top clause");
      next();
      next();
    }
    do {
      try {
        SelectItem item;
        item.expr = parse_expr();
        item.alias = parse_optional_alias();
        stmt.items.push_back(std::move(item));
      } catch (const SyntaxError& e) {
        recover_select_item(e.what());
      }
    } while (accept(TokenKind::Comma));

    if (accept_kw("into")) {
      reasons_.push_back("select into");
      parse_identifier("target table");
    }
    if (accept_kw("from")) {
      try {
        parse_from(stmt.from);
      } catch (const SyntaxError& e) {
        recover(std::string("from clause: ") + e.what());
      }
    }
    if (accept_kw("where")) {
      try {
        stmt.where = parse_expr();
      } catch (const SyntaxError& e) {
        stmt.where.reset();
        recover(std::string("where clause: ") + e.what());
      }
    }
    if (accept_kw("group")) {
      try {
        expect_kw("by");
        do {
          stmt.group_by.push_back(parse_expr());
        } while (accept(TokenKind::Comma));
      } catch (const SyntaxError& e) {
        stmt.group_by.clear();
        recover(std::string("group by clause: ") + e.what());
      }
    }
    if (accept_kw("having")) {
      try {
        stmt.having = parse_expr();
      } catch (const SyntaxError& e) {
        stmt.having.reset();
        recover(std::string("having clause: ") + e.what());
      }
    }
    if (accept_kw("order")) {
      try {
        expect_kw("by");
        do {
          OrderItem item;
          item.expr = parse_expr();
          if (accept_kw("desc")) {
            item.descending = true;
          } else {
            accept_kw("asc");
          }
          if (accept_kw("nulls")) {
            if (!accept_kw("first")) expect_kw("last");
          }
          stmt.order_by.push_back(std::move(item));
        } while (accept(TokenKind::Comma));
      } catch (const SyntaxError& e) {
        stmt.order_by.clear();
        recover(std::string("order by clause: ") + e.what());
      }
    }
    if (accept_kw("limit")) stmt.limit = collect_tail_tokens();
    if (accept_kw("offset") || accept_kw("fetch")) {
      const auto tail = collect_tail_tokens();
      stmt.limit += (stmt.limit.empty() ? "" : " ") + std::string("offset ") + tail;
    }
  }

  void recover_select_item(const std::string& why) {
    reasons_.push_back("select item: " + why);
    int depth = 0;
    while (peek().kind != TokenKind::End) {
      if (depth == 0 && (peek().kind == TokenKind::Comma || at_clause_boundary())) return;
      if (peek().kind == TokenKind::LParen) ++depth;
      if (peek().kind == TokenKind::RParen) --depth;
      next();
    }
  }

  std::string collect_tail_tokens() {
    std::vector<std::string> parts;
    int depth = 0;
    while (peek().kind != TokenKind::End) {
      if (depth == 0 && (at_clause_boundary() || at_kw("offset") || at_kw("fetch"))) break;
      if (peek().kind == TokenKind::LParen) ++depth;
      if (peek().kind == TokenKind::RParen) --depth;
      const Token& t = next();
      parts.push_back(t.kind == TokenKind::Identifier ? text::to_lower(t.text) : t.text);
    }
    return text::join(parts, " ");
  }

  // ------------------------------------------------------------------- from

  void parse_from(std::vector<TableRef>& from) {
    parse_table_item(from, JoinKind::Comma);
    for (;;) {
      if (accept(TokenKind::Comma)) {
        parse_table_item(from, JoinKind::Comma);
        continue;
      }
      bool natural = accept_kw("natural");
      JoinKind kind;
      if (accept_kw("join")) {
        kind = JoinKind::Inner;
      } else if (accept_kw("inner")) {
        expect_kw("join");
        kind = JoinKind::Inner;
      } else if (accept_kw("left")) {
        accept_kw("outer");
        expect_kw("join");
        kind = JoinKind::Left;
      } else if (accept_kw("right")) {
        accept_kw("outer");
        expect_kw("join");
        kind = JoinKind::Right;
      } else if (accept_kw("full")) {
        accept_kw("outer");
        expect_kw("join");
        kind = JoinKind::Full;
      } else if (accept_kw("cross")) {
        expect_kw("join");
        kind = JoinKind::Cross;
      } else {
        if (natural) throw SyntaxError("expected join after natural");
        return;
      }
      if (natural) reasons_.push_back("natural join");
      const std::size_t at = from.size();
      parse_table_item(from, kind);
      TableRef& item = from[at];
      if (accept_kw("on")) {
        item.on = parse_expr();
      } else if (accept_kw("using")) {
        expect(TokenKind::LParen, "'('");
        do {
          item.using_columns.push_back(parse_identifier("column"));
        } while (accept(TokenKind::Comma));
        expect(TokenKind::RParen, "')'");
      }
    }
  }

  void parse_table_item(std::vector<TableRef>& from, JoinKind kind) {
    accept_kw("lateral");
    if (peek().kind == TokenKind::LParen) {
      if (at_query_start(1) || (peek(1).kind == TokenKind::LParen && at_query_start(2))) {
        next();
        TableRef ref;
        ref.derived = parse_query();
        expect(TokenKind::RParen, "')'");
        ref.alias = parse_optional_alias();
        if (peek().kind == TokenKind::LParen) skip_balanced_parens();
        ref.join = kind;
        from.push_back(std::move(ref));
        return;
      }
      // Parenthesized join group: splice its items in place.
      next();
      const std::size_t at = from.size();
      parse_from(from);
      expect(TokenKind::RParen, "')'");
      if (at < from.size()) from[at].join = kind;
      const auto alias = parse_optional_alias();
      if (!alias.empty()) reasons_.push_back("alias on parenthesized join");
      return;
    }
    TableRef ref;
    ref.join = kind;
    std::string name = parse_identifier("table name");
    while (accept(TokenKind::Dot)) name = parse_identifier("table name");
    ref.name = std::move(name);
    if (peek().kind == TokenKind::LParen) {
      reasons_.push_back("table function '" + ref.name + "'");
      skip_balanced_parens();
      ref.derived = std::make_shared<SelectStatement>();
      ref.alias = parse_optional_alias();
      if (ref.alias.empty()) ref.alias = ref.name;
      ref.name.clear();
      from.push_back(std::move(ref));
      return;
    }
    ref.alias = parse_optional_alias();
    if (ref.alias == ref.name) ref.alias.clear();
    if (peek().kind == TokenKind::LParen) skip_balanced_parens();
    from.push_back(std::move(ref));
  }

  // ------------------------------------------------------------ expressions

  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (accept_kw("or")) lhs = make_binary("or", std::move(lhs), parse_and());
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    while (accept_kw("and")) lhs = make_binary("and", std::move(lhs), parse_not());
    return lhs;
  }

  Expr parse_not() {
    if (at_kw("not") && !at_kw("exists", 1)) {
      next();
      Expr e;
      e.kind = ExprKind::Unary;
      e.op = "not";
      e.args.push_back(parse_not());
      return e;
    }
    return parse_predicate();
  }

  Expr parse_predicate() {
    Expr lhs = parse_additive();
    for (;;) {
      const Token& t = peek();
      if (t.kind == TokenKind::Operator && is_comparison(t.text)) {
        std::string op = next().text;
        if (op == "!=") op = "<>";
        Expr rhs;
        if ((at_kw("any") || at_kw("all") || at_kw("some")) && peek(1).kind == TokenKind::LParen) {
          rhs.kind = ExprKind::Function;
          rhs.op = text::to_lower(next().text);
          next();
          Expr sub;
          sub.kind = ExprKind::Subquery;
          if (at_query_start()) {
            sub.subquery = parse_query();
          } else {
            sub = parse_expr();
          }
          expect(TokenKind::RParen, "')'");
          rhs.args.push_back(std::move(sub));
        } else {
          rhs = parse_additive();
        }
        lhs = make_binary(std::move(op), std::move(lhs), std::move(rhs));
        continue;
      }
      bool negated = false;
      if (at_kw("not") && (at_kw("like", 1) || at_kw("ilike", 1) || at_kw("in", 1) || at_kw("between", 1))) {
        next();
        negated = true;
      }
      if (at_kw("like") || at_kw("ilike")) {
        std::string op = text::to_lower(next().text);
        Expr rhs = parse_additive();
        if (accept_kw("escape")) rhs = make_binary("escape", std::move(rhs), parse_primary());
        lhs = make_binary(std::move(op), std::move(lhs), std::move(rhs));
        lhs.negated = negated;
        continue;
      }
      if (accept_kw("in")) {
        expect(TokenKind::LParen, "'('");
        Expr e;
        e.negated = negated;
        e.args.push_back(std::move(lhs));
        if (at_query_start()) {
          e.kind = ExprKind::InSubquery;
          e.subquery = parse_query();
        } else {
          e.kind = ExprKind::InList;
          do {
            e.args.push_back(parse_expr());
          } while (accept(TokenKind::Comma));
        }
        expect(TokenKind::RParen, "')'");
        lhs = std::move(e);
        continue;
      }
      if (accept_kw("between")) {
        Expr e;
        e.kind = ExprKind::Between;
        e.negated = negated;
        e.args.push_back(std::move(lhs));
        accept_kw("symmetric");
        e.args.push_back(parse_additive());
        expect_kw("and");
        e.args.push_back(parse_additive());
        lhs = std::move(e);
        continue;
      }
      if (negated) throw SyntaxError("dangling not");
      if (accept_kw("is")) {
        Expr e;
        e.kind = ExprKind::IsNull;
        e.negated = accept_kw("not");
        if (accept_kw("null")) {
          e.op = "null";
        } else if (accept_kw("true")) {
          e.op = "true";
        } else if (accept_kw("false")) {
          e.op = "false";
        } else if (accept_kw("unknown")) {
          e.op = "unknown";
        } else if (accept_kw("distinct")) {
          expect_kw("from");
          Expr rhs = parse_additive();
          lhs = make_binary(e.negated ? "is not distinct from" : "is distinct from", std::move(lhs), std::move(rhs));
          continue;
        } else {
          throw SyntaxError("unexpected token after IS");
        }
        e.args.push_back(std::move(lhs));
        lhs = std::move(e);
        continue;
      }
      return lhs;
    }
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (at_op("+") || at_op("-") || at_op("||") || at_op("&") || at_op("|") || at_op("^")) {
      std::string op = next().text;
      lhs = make_binary(std::move(op), std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    while (at_op("*") || at_op("/") || at_op("%")) {
      std::string op = next().text;
      lhs = make_binary(std::move(op), std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (at_op("-") || at_op("+") || at_op("~")) {
      Expr e;
      e.kind = ExprKind::Unary;
      e.op = next().text;
      e.args.push_back(parse_unary());
      return e;
    }
    Expr e = parse_primary();
    for (;;) {
      if (at_op("::")) {
        next();
        Expr c;
        c.kind = ExprKind::Cast;
        c.op = parse_type_name();
        c.args.push_back(std::move(e));
        e = std::move(c);
      } else if (accept_kw("collate")) {
        next();
      } else {
        return e;
      }
    }
  }

  std::string parse_type_name() {
    std::vector<std::string> parts;
    while (peek().kind == TokenKind::Identifier || peek().kind == TokenKind::QuotedIdentifier) {
      if (at_kw("as") || at_kw("from") || at_kw("and") || at_kw("or") || at_clause_boundary()) break;
      parts.push_back(text::to_lower(next().text));
    }
    if (parts.empty()) throw SyntaxError("expected type name");
    std::string out = text::join(parts, " ");
    if (peek().kind == TokenKind::LParen) {
      next();
      out += "(";
      bool first = true;
      while (peek().kind != TokenKind::RParen && peek().kind != TokenKind::End) {
        if (!first && peek().kind != TokenKind::Comma && out.back() != ',') out += " ";
        out += next().text;
        first = false;
      }
      expect(TokenKind::RParen, "')'");
      out += ")";
    }
    return out;
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number:
      case TokenKind::String:
        return make_literal(next().text);
      case TokenKind::Parameter: {
        Expr e;
        e.kind = ExprKind::Parameter;
        e.op = next().text;
        return e;
      }
      case TokenKind::LParen: {
        next();
        if (at_query_start()) {
          Expr e;
          e.kind = ExprKind::Subquery;
          e.subquery = parse_query();
          expect(TokenKind::RParen, "')'");
          return e;
        }
        Expr e = parse_expr();
        if (peek().kind == TokenKind::Comma) {
          Expr row;
          row.kind = ExprKind::Function;
          row.op = "row";
          row.args.push_back(std::move(e));
          while (accept(TokenKind::Comma)) row.args.push_back(parse_expr());
          e = std::move(row);
        }
        expect(TokenKind::RParen, "')'");
        return e;
      }
      case TokenKind::Operator:
        if (t.text == "*") {
          next();
          Expr e;
          e.kind = ExprKind::Star;
          return e;
        }
        break;
      case TokenKind::Identifier:
        return parse_word();
      case TokenKind::QuotedIdentifier:
        return parse_name_path();
      default:
        break;
    }
    throw SyntaxError("unexpected token '" + t.text + "' at offset " + std::to_string(t.offset));
  }

  Expr parse_word() {
    const std::string w = text::to_lower(peek().text);
    if (w == "null" || w == "true" || w == "false") {
      next();
      return make_literal(w);
    }
    if (w == "case") return parse_case();
    if (w == "cast" && peek(1).kind == TokenKind::LParen) {
      next();
      next();
      Expr e;
      e.kind = ExprKind::Cast;
      e.args.push_back(parse_expr());
      expect_kw("as");
      e.op = parse_type_name();
      expect(TokenKind::RParen, "')'");
      return e;
    }
    if (w == "exists" || (w == "not" && at_kw("exists", 1))) {
      Expr e;
      e.kind = ExprKind::Exists;
      if (w == "not") {
        next();
        e.negated = true;
      }
      next();
      expect(TokenKind::LParen, "'('");
      e.subquery = parse_query();
      expect(TokenKind::RParen, "')'");
      return e;
    }
    if ((w == "date" || w == "time" || w == "timestamp" || w == "interval") && peek(1).kind == TokenKind::String) {
      next();
      std::string lit = w + " " + next().text;
      if (w == "interval" && peek().kind == TokenKind::Identifier) {
        static constexpr std::string_view units[] = {"year", "years", "month", "months", "day", "days", "hour",
                                                      "hours", "minute", "minutes", "second", "seconds"};
        const auto u = text::to_lower(peek().text);
        if (std::find(std::begin(units), std::end(units), u) != std::end(units)) {
          lit += " " + u;
          next();
        }
      }
      return make_literal(std::move(lit));
    }
    if (is_reserved_word(w)) {
      throw SyntaxError("unexpected keyword '" + w + "' at offset " + std::to_string(peek().offset));
    }
    return parse_name_path();
  }

  Expr parse_name_path() {
    std::vector<std::string> parts;
    parts.push_back(text::to_lower(next().text));
    while (peek().kind == TokenKind::Dot) {
      next();
      if (at_op("*")) {
        next();
        Expr e;
        e.kind = ExprKind::Star;
        e.qualifier = parts.back();
        return e;
      }
      const Token& t = peek();
      if (t.kind != TokenKind::Identifier && t.kind != TokenKind::QuotedIdentifier) {
        throw SyntaxError("expected name after '.'");
      }
      parts.push_back(text::to_lower(next().text));
    }
    if (parts.size() == 1 && peek().kind == TokenKind::LParen) return parse_function(parts.front());
    if (parts.size() == 1) return make_column("", parts[0]);
    return make_column(parts[parts.size() - 2], parts.back());
  }

  Expr parse_function(std::string name) {
    expect(TokenKind::LParen, "'('");
    Expr e;
    e.kind = ExprKind::Function;
    e.op = std::move(name);
    if (peek().kind != TokenKind::RParen) {
      if (accept_kw("distinct")) {
        e.distinct = true;
      } else {
        accept_kw("all");
      }
      for (;;) {
        e.args.push_back(parse_expr());
        if (accept(TokenKind::Comma) || accept_kw("from") || accept_kw("for") || accept_kw("as")) continue;
        break;
      }
    }
    expect(TokenKind::RParen, "')'");
    if (accept_kw("filter")) {
      reasons_.push_back("aggregate filter clause");
      skip_balanced_parens();
    }
    if (accept_kw("within")) {
      reasons_.push_back("within group");
      expect_kw("group");
      skip_balanced_parens();
    }
    if (accept_kw("over")) {
      reasons_.push_back("window function '" + e.op + "'");
      if (peek().kind == TokenKind::LParen) {
        skip_balanced_parens();
      } else {
        next();
      }
    }
    return e;
  }

  Expr parse_case() {
    expect_kw("case");
    Expr e;
    e.kind = ExprKind::Case;
    if (!at_kw("when")) {
      e.has_operand = true;
      e.args.push_back(parse_expr());
    }
    while (accept_kw("when")) {
      e.args.push_back(parse_expr());
      expect_kw("then");
      e.args.push_back(parse_expr());
    }
    if (accept_kw("else")) {
      e.has_else = true;
      e.args.push_back(parse_expr());
    }
    expect_kw("end");
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string>& reasons_;
};

}  // namespace

bool is_reserved_word(std::string_view lowercase_word) {
  return std::find(kReserved.begin(), kReserved.end(), lowercase_word) != kReserved.end();
}

SqlAst parse_sql(std::string_view sql) {
  if (text::trim(sql).empty()) throw std::invalid_argument("empty SQL text");
  std::vector<std::string> reasons;
  Parser parser(tokenize(sql), reasons);
  SqlAst ast;
  try {
    ast = parser.parse_statement();
  } catch (const SyntaxError& e) {
    // Damage outside any recoverable clause: keep nothing but the flag.
    ast = SqlAst{};
    reasons.push_back(e.what());
  }
  ast.unsupported = !reasons.empty();
  ast.unsupported_reasons = std::move(reasons);
  return ast;
}

Expr parse_expression(std::string_view sql) {
  std::vector<std::string> reasons;
  Parser parser(tokenize(sql), reasons);
  try {
    Expr e = parser.parse_standalone_expression();
    if (!reasons.empty()) throw std::invalid_argument(reasons.front());
    return e;
  } catch (const SyntaxError& e) {
    throw std::invalid_argument(e.what());
  }
}

}  // namespace tailorsql::sql
