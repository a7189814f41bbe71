#include "tailorsql/sql/subcomponents.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "tailorsql/sql/render.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::sql {

namespace {

struct ScopeEntry {
  std::string binding;  // alias, or the table name when unaliased
  std::string base;     // base table; empty for derived tables and CTE references
};

struct Scope {
  const Scope* parent = nullptr;
  std::vector<ScopeEntry> entries;
  std::set<std::string> cte_names;

  [[nodiscard]] bool is_cte(const std::string& name) const {
    for (const Scope* s = this; s != nullptr; s = s->parent) {
      if (s->cte_names.count(name) != 0) return true;
    }
    return false;
  }
};

struct ResolvedColumn {
  std::string text;
  std::string table;  // base table, empty when not resolved to one
};

ResolvedColumn resolve(const Scope& scope, const Expr& col) {
  const std::string name = render_identifier(col.op);
  if (!col.qualifier.empty()) {
    for (const Scope* s = &scope; s != nullptr; s = s->parent) {
      for (const auto& e : s->entries) {
        if (e.binding == col.qualifier || (!e.base.empty() && e.base == col.qualifier)) {
          if (e.base.empty()) return {render_identifier(col.qualifier) + "." + name, ""};
          return {render_identifier(e.base) + "." + name, e.base};
        }
      }
    }
    return {render_identifier(col.qualifier) + "." + name, ""};
  }
  for (const Scope* s = &scope; s != nullptr; s = s->parent) {
    if (s->entries.empty()) continue;
    if (s->entries.size() == 1 && !s->entries.front().base.empty()) {
      const auto& base = s->entries.front().base;
      return {render_identifier(base) + "." + name, base};
    }
    break;
  }
  return {name, ""};
}

void for_each_column(const Expr& e, const std::function<void(const Expr&)>& fn) {
  if (e.kind == ExprKind::Column) fn(e);
  for (const auto& a : e.args) for_each_column(a, fn);
}

void for_each_subquery(const Expr& e, const std::function<void(const SelectStatement&)>& fn) {
  if (e.subquery) fn(*e.subquery);
  for (const auto& a : e.args) for_each_subquery(a, fn);
}

void flatten_and(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == ExprKind::Binary && e.op == "and") {
    flatten_and(e.args[0], out);
    flatten_and(e.args[1], out);
  } else {
    out.push_back(&e);
  }
}

std::string canonical_select_in(const SelectStatement& s, const Scope* parent);

class ScopedContext : public RenderContext {
 public:
  explicit ScopedContext(const Scope& scope) : scope_(scope) {}
  [[nodiscard]] std::string column(const Expr& c) const override { return resolve(scope_, c).text; }
  [[nodiscard]] std::string subquery(const SelectStatement& s) const override {
    return canonical_select_in(s, &scope_);
  }

 private:
  const Scope& scope_;
};

class UnqualifiedContext : public RenderContext {
 public:
  [[nodiscard]] std::string column(const Expr& c) const override { return render_identifier(c.op); }
};

Scope build_scope(const SelectStatement& s, const Scope* parent) {
  Scope scope;
  scope.parent = parent;
  for (const auto& cte : s.with) scope.cte_names.insert(cte.name);
  for (const auto& ref : s.from) {
    if (ref.derived || scope.is_cte(ref.name)) {
      scope.entries.push_back({ref.binding_name(), ""});
    } else {
      scope.entries.push_back({ref.binding_name(), ref.name});
    }
  }
  return scope;
}

// Equality conjuncts synthesized from JOIN ... USING (c).
std::vector<Expr> using_conditions(const SelectStatement& s) {
  std::vector<Expr> out;
  for (std::size_t i = 1; i < s.from.size(); ++i) {
    for (const auto& col : s.from[i].using_columns) {
      out.push_back(make_binary("=", make_column(s.from[i - 1].binding_name(), col),
                                make_column(s.from[i].binding_name(), col)));
    }
  }
  return out;
}

std::set<std::string> referenced_tables(const Expr& e, const Scope& scope) {
  std::set<std::string> out;
  for_each_column(e, [&](const Expr& c) {
    auto r = resolve(scope, c);
    if (!r.table.empty()) out.insert(r.table);
  });
  return out;
}

bool is_join_condition(const Expr& e, const Scope& scope) {
  if (e.kind != ExprKind::Binary || e.op != "=") return false;
  if (e.args[0].kind != ExprKind::Column || e.args[1].kind != ExprKind::Column) return false;
  const auto l = resolve(scope, e.args[0]);
  const auto r = resolve(scope, e.args[1]);
  return !l.table.empty() && !r.table.empty() && l.table != r.table;
}

struct Accumulator {
  std::set<std::string> tables;
  std::set<std::string> joins;
  std::map<std::string, std::set<std::string>> filters;
  std::vector<std::string> group_by;
  std::set<std::string> group_by_tables;
  bool have_group_by = false;
  std::set<std::string> columns;
  std::set<std::string> unresolved;
};

void extract_select(const SelectStatement& s, const Scope* parent, Accumulator& acc) {
  {
    // CTE bodies see the enclosing scope plus earlier CTEs.
    Scope cte_scope;
    cte_scope.parent = parent;
    for (const auto& cte : s.with) {
      extract_select(*cte.select, &cte_scope, acc);
      cte_scope.cte_names.insert(cte.name);
    }
  }
  Scope scope = build_scope(s, parent);
  for (const auto& ref : s.from) {
    if (ref.derived) {
      extract_select(*ref.derived, parent, acc);
    } else if (!scope.is_cte(ref.name)) {
      acc.tables.insert(ref.name);
    }
  }
  const ScopedContext ctx(scope);

  std::vector<const Expr*> conjuncts;
  for (const auto& ref : s.from) {
    if (ref.on) flatten_and(*ref.on, conjuncts);
  }
  if (s.where) flatten_and(*s.where, conjuncts);
  const auto synthesized = using_conditions(s);
  for (const auto& e : synthesized) conjuncts.push_back(&e);

  for (const Expr* c : conjuncts) {
    const auto rendered = render_expression(*c, ctx);
    if (is_join_condition(*c, scope)) {
      acc.joins.insert(rendered);
    } else {
      auto& tables = acc.filters[rendered];
      const auto refs = referenced_tables(*c, scope);
      tables.insert(refs.begin(), refs.end());
    }
  }

  if (!s.group_by.empty() && !acc.have_group_by) {
    acc.have_group_by = true;
    for (const auto& g : s.group_by) {
      acc.group_by.push_back(render_expression(g, ctx));
      const auto refs = referenced_tables(g, scope);
      acc.group_by_tables.insert(refs.begin(), refs.end());
    }
    std::sort(acc.group_by.begin(), acc.group_by.end());
    acc.group_by.erase(std::unique(acc.group_by.begin(), acc.group_by.end()), acc.group_by.end());
  }

  std::vector<const Expr*> all;
  for (const auto& item : s.items) all.push_back(&item.expr);
  for (const auto& ref : s.from) {
    if (ref.on) all.push_back(&*ref.on);
  }
  if (s.where) all.push_back(&*s.where);
  for (const auto& g : s.group_by) all.push_back(&g);
  if (s.having) all.push_back(&*s.having);
  for (const auto& o : s.order_by) all.push_back(&o.expr);
  for (const auto& e : synthesized) all.push_back(&e);

  for (const Expr* e : all) {
    for_each_column(*e, [&](const Expr& c) {
      auto r = resolve(scope, c);
      if (!r.table.empty()) {
        acc.columns.insert(r.table + "." + c.op);
      } else if (c.qualifier.empty()) {
        acc.unresolved.insert(c.op);
      }
    });
  }
  for (const Expr* e : all) {
    for_each_subquery(*e, [&](const SelectStatement& sub) { extract_select(sub, &scope, acc); });
  }
  for (const auto& op : s.set_operations) extract_select(*op.select, parent, acc);
}

std::string canonical_select_in(const SelectStatement& s, const Scope* parent) {
  Scope scope = build_scope(s, parent);
  const ScopedContext ctx(scope);
  std::string out;

  if (!s.with.empty()) {
    Scope cte_scope;
    cte_scope.parent = parent;
    std::vector<std::string> ctes;
    for (const auto& cte : s.with) {
      ctes.push_back(render_identifier(cte.name) + " as (" + canonical_select_in(*cte.select, &cte_scope) + ")");
      cte_scope.cte_names.insert(cte.name);
    }
    out += "with " + text::join(ctes, ", ") + " ";
  }

  std::vector<std::string> items;
  for (const auto& item : s.items) items.push_back(render_expression(item.expr, ctx));
  out += s.distinct ? "select distinct " : "select ";
  out += text::join(items, ", ");

  std::vector<std::string> inner_from;
  std::vector<std::string> outer_joins;
  std::vector<std::string> conjuncts;
  for (const auto& ref : s.from) {
    const std::string item = ref.derived ? "(" + canonical_select_in(*ref.derived, parent) + ") " +
                                               render_identifier(ref.binding_name())
                                         : render_identifier(ref.name);
    const bool outer = ref.join == JoinKind::Left || ref.join == JoinKind::Right || ref.join == JoinKind::Full;
    if (outer) {
      const char* kw = ref.join == JoinKind::Left ? " left join " : ref.join == JoinKind::Right ? " right join " : " full join ";
      outer_joins.push_back(kw + item + (ref.on ? " on " + render_expression(*ref.on, ctx) : std::string()));
    } else {
      inner_from.push_back(item);
      if (ref.on) {
        std::vector<const Expr*> parts;
        flatten_and(*ref.on, parts);
        for (const Expr* p : parts) conjuncts.push_back(render_expression(*p, ctx));
      }
    }
  }
  for (const auto& e : using_conditions(s)) conjuncts.push_back(render_expression(e, ctx));
  if (s.where) {
    std::vector<const Expr*> parts;
    flatten_and(*s.where, parts);
    for (const Expr* p : parts) conjuncts.push_back(render_expression(*p, ctx));
  }
  std::sort(inner_from.begin(), inner_from.end());
  if (!inner_from.empty() || !outer_joins.empty()) {
    out += " from " + text::join(inner_from, ", ");
    for (const auto& j : outer_joins) out += j;
  }
  if (!conjuncts.empty()) {
    std::sort(conjuncts.begin(), conjuncts.end());
    conjuncts.erase(std::unique(conjuncts.begin(), conjuncts.end()), conjuncts.end());
    out += " where " + text::join(conjuncts, " and ");
  }
  if (!s.group_by.empty()) {
    std::vector<std::string> g;
    for (const auto& e : s.group_by) g.push_back(render_expression(e, ctx));
    std::sort(g.begin(), g.end());
    out += " group by " + text::join(g, ", ");
  }
  if (s.having) out += " having " + render_expression(*s.having, ctx);
  if (!s.order_by.empty()) {
    std::vector<std::string> o;
    for (const auto& item : s.order_by) o.push_back(render_expression(item.expr, ctx) + (item.descending ? " desc" : ""));
    out += " order by " + text::join(o, ", ");
  }
  if (!s.limit.empty()) out += " limit " + s.limit;
  for (const auto& op : s.set_operations) out += " " + op.op + " " + canonical_select_in(*op.select, parent);
  return out;
}

}  // namespace

bool QuerySubcomponents::has_filter(const std::string& canonical) const {
  auto it = std::lower_bound(filters.begin(), filters.end(), canonical,
                             [](const AnnotatedPredicate& p, const std::string& t) { return p.text < t; });
  return it != filters.end() && it->text == canonical;
}

QuerySubcomponents extract_subcomponents(const SqlAst& ast) {
  QuerySubcomponents out;
  out.unsupported = ast.unsupported;
  if (!ast.select) return out;
  Accumulator acc;
  extract_select(*ast.select, nullptr, acc);
  out.tables = std::move(acc.tables);
  out.join_conditions = std::move(acc.joins);
  for (auto& [text, tables] : acc.filters) out.filters.push_back({text, std::move(tables)});
  out.group_by = std::move(acc.group_by);
  out.group_by_tables = std::move(acc.group_by_tables);
  out.columns = std::move(acc.columns);
  out.unresolved_columns = std::move(acc.unresolved);
  return out;
}

std::string canonical_sql(const SelectStatement& select) { return canonical_select_in(select, nullptr); }

std::string canonical_sql(const SqlAst& ast) { return ast.select ? canonical_sql(*ast.select) : std::string(); }

std::vector<std::string> unqualified_filters(const SqlAst& ast) {
  std::vector<std::string> out;
  if (!ast.select || !ast.select->where) return out;
  std::vector<const Expr*> parts;
  flatten_and(*ast.select->where, parts);
  const UnqualifiedContext ctx;
  for (const Expr* p : parts) out.push_back(render_expression(*p, ctx));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tailorsql::sql
