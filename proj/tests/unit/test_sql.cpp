#include <catch_amalgamated.hpp>

#include <random>

#include "tailorsql/errors.hpp"
#include "tailorsql/sql/parser.hpp"
#include "tailorsql/sql/query_log.hpp"
#include "tailorsql/sql/render.hpp"
#include "tailorsql/sql/subcomponents.hpp"

using namespace tailorsql;
using namespace tailorsql::sql;

namespace {

QuerySubcomponents subs_of(std::string_view sql) { return extract_subcomponents(parse_sql(sql)); }

std::vector<std::string> filter_texts(const QuerySubcomponents& s) {
  std::vector<std::string> out;
  for (const auto& f : s.filters) out.push_back(f.text);
  return out;
}

}  // namespace

TEST_CASE("minimal select parses to a single table") {
  const auto ast = parse_sql("SELECT a FROM t");
  REQUIRE(ast.select);
  CHECK_FALSE(ast.unsupported);
  REQUIRE(ast.select->from.size() == 1);
  CHECK(ast.select->from[0].name == "t");
  CHECK_FALSE(ast.select->where);
  CHECK(ast.select->group_by.empty());

  const auto s = extract_subcomponents(ast);
  CHECK(s.tables == std::set<std::string>{"t"});
  CHECK(s.join_conditions.empty());
  CHECK(s.filters.empty());
  CHECK(s.group_by.empty());
}

TEST_CASE("where clause with two conjuncts") {
  const auto ast = parse_sql("SELECT * FROM t WHERE x = 3 AND y > 2");
  REQUIRE(ast.select->where);
  const auto& w = *ast.select->where;
  CHECK(w.kind == ExprKind::Binary);
  CHECK(w.op == "and");
  REQUIRE(w.args.size() == 2);
  CHECK(w.args[0] == make_binary("=", make_column("", "x"), make_literal("3")));
  CHECK(w.args[1] == make_binary(">", make_column("", "y"), make_literal("2")));
  CHECK(filter_texts(extract_subcomponents(ast)) == std::vector<std::string>{"t.x = 3", "t.y > 2"});
}

TEST_CASE("join on with group by matches hand-built ast") {
  const auto ast = parse_sql("SELECT t1.a FROM t1 JOIN t2 ON t1.id = t2.tid GROUP BY t1.a");
  REQUIRE(ast.select);
  const auto& s = *ast.select;
  REQUIRE(s.from.size() == 2);
  CHECK(s.from[0].name == "t1");
  CHECK(s.from[1].name == "t2");
  CHECK(s.from[1].join == JoinKind::Inner);
  REQUIRE(s.from[1].on);
  CHECK(*s.from[1].on == make_binary("=", make_column("t1", "id"), make_column("t2", "tid")));
  REQUIRE(s.group_by.size() == 1);
  CHECK(s.group_by[0] == make_column("t1", "a"));

  const auto subs = extract_subcomponents(ast);
  CHECK(subs.tables == std::set<std::string>{"t1", "t2"});
  CHECK(subs.join_conditions == std::set<std::string>{"t1.id = t2.tid"});
  CHECK(subs.group_by == std::vector<std::string>{"t1.a"});
  CHECK(subs.group_by_tables == std::set<std::string>{"t1"});
  CHECK(subs.filters.empty());
}

TEST_CASE("three-table path through a bridge table resolves aliases") {
  const auto subs = subs_of(
      "SELECT T1.element FROM atom AS T1 INNER JOIN cnt AS T2 ON T1.id = T2.atom_id "
      "INNER JOIN bond AS T3 ON T3.id = T2.bond_id WHERE T3.bond_type = '='");
  CHECK(subs.tables == std::set<std::string>{"atom", "bond", "cnt"});
  CHECK(subs.join_conditions == std::set<std::string>{"atom.id = cnt.atom_id", "bond.id = cnt.bond_id"});
  CHECK(filter_texts(subs) == std::vector<std::string>{"bond.bond_type = '='"});
  REQUIRE(subs.filters.size() == 1);
  CHECK(subs.filters[0].tables == std::set<std::string>{"bond"});
  CHECK(subs.columns ==
        std::set<std::string>{"atom.element", "atom.id", "bond.bond_type", "bond.id", "cnt.atom_id", "cnt.bond_id"});
}

TEST_CASE("comma join with where equality counts as a join condition") {
  const auto subs = subs_of("select * from a x, b y where x.k = y.k and x.v > 1");
  CHECK(subs.join_conditions == std::set<std::string>{"a.k = b.k"});
  CHECK(filter_texts(subs) == std::vector<std::string>{"a.v > 1"});
}

TEST_CASE("group by column of a single table") {
  const auto subs = subs_of("SELECT id FROM venue GROUP BY id");
  CHECK(subs.group_by == std::vector<std::string>{"venue.id"});
  CHECK(subs.group_by_tables == std::set<std::string>{"venue"});
}

TEST_CASE("nested subquery components merge into the parent") {
  const auto subs = subs_of(
      "SELECT name FROM customer c WHERE c.id IN (SELECT o.cid FROM orders o JOIN item i ON o.iid = i.id "
      "WHERE i.price > 10)");
  CHECK(subs.tables == std::set<std::string>{"customer", "item", "orders"});
  CHECK(subs.join_conditions == std::set<std::string>{"item.id = orders.iid"});
  const auto f = filter_texts(subs);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == "customer.id in (select orders.cid from item, orders where item.id = orders.iid and item.price > 10)");
  CHECK(f[1] == "item.price > 10");
}

TEST_CASE("correlated subquery resolves outer references") {
  const auto subs = subs_of("SELECT a FROM t WHERE EXISTS (SELECT 1 FROM s WHERE s.k = t.k)");
  CHECK(subs.join_conditions == std::set<std::string>{"s.k = t.k"});
  CHECK(subs.tables == std::set<std::string>{"s", "t"});
}

TEST_CASE("derived table columns stay unresolved and aliases never leak") {
  const auto subs = subs_of("SELECT d.n FROM (SELECT count(*) AS n FROM t GROUP BY t.g) AS d");
  CHECK(subs.tables == std::set<std::string>{"t"});
  CHECK(subs.group_by == std::vector<std::string>{"t.g"});
  CHECK(subs.tables.count("d") == 0);
}

TEST_CASE("canonicalize sorts equality operands and keeps literals") {
  CHECK(canonicalize("T2.tid = T1.id") == "t1.id = t2.tid");
  CHECK(canonicalize("birthdate/10000 = 1990") == "birthdate/10000 = 1990");
  CHECK(canonicalize("Name = 'Alice Smith'") == "name = 'Alice Smith'");
  CHECK(canonicalize("b > 2 AND a = 1") == "a = 1 and b > 2");
  CHECK(canonicalize("x   >=   -3") == "x >= -3");
}

TEST_CASE("canonicalize is idempotent") {
  const std::vector<std::string> inputs = {
      "T2.tid = T1.id",
      "birthdate/10000 = 1990",
      "a - (b - c) = 4",
      "NOT (x = 1 OR y = 2) AND z LIKE 'A%'",
      "- - x = 1",
      "a - -b < 3",
      "x BETWEEN 1 AND 2 OR y IN (3, 1, 2)",
      "cast(x as integer) = 3",
      "CASE WHEN a > 1 THEN 'x' ELSE 'y' END = 'x'",
      "this is ( not sql",
      "'unterminated",
      "count(DISTINCT a) > 2",
      "a IS NOT NULL",
  };
  for (const auto& in : inputs) {
    const auto once = canonicalize(in);
    INFO(in << " -> " << once);
    CHECK(canonicalize(once) == once);
  }
}

TEST_CASE("alias and whitespace variants of a join path canonicalize identically") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> tables = {"atom", "bond", "cnt", "molecule"};
  auto alias = [&](int i) { return "A" + std::to_string(rng() % 1000) + "_" + std::to_string(i); };
  auto space = [&]() { return std::string(1 + rng() % 3, rng() % 2 ? ' ' : '\n'); };
  std::string reference;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a0 = alias(0), a1 = alias(1), a2 = alias(2);
    const bool flip = rng() % 2;
    const std::string cond1 = flip ? a1 + ".atom_id" + space() + "=" + space() + a0 + ".id" : a0 + ".id = " + a1 + ".atom_id";
    const std::string cond2 = flip ? a2 + ".id=" + a1 + ".bond_id" : a1 + ".bond_id" + space() + "=" + a2 + ".ID";
    std::string sql;
    if (rng() % 2) {
      sql = "SELECT" + space() + a0 + ".element FROM atom " + a0 + " JOIN cnt AS " + a1 + " ON " + cond1 +
            space() + "JOIN Bond " + a2 + " ON " + cond2;
    } else {
      sql = "select " + a0 + ".element from cnt " + a1 + "," + space() + "BOND " + a2 + ", atom " + a0 +
            " where " + cond2 + " AND" + space() + cond1;
    }
    const auto ast = parse_sql(sql);
    const auto subs = extract_subcomponents(ast);
    CHECK(subs.join_conditions == std::set<std::string>{"atom.id = cnt.atom_id", "bond.id = cnt.bond_id"});
    const auto canonical = canonical_sql(ast);
    if (trial == 0) reference = canonical;
    INFO(sql);
    CHECK(canonical == reference);
  }
  CHECK(reference == "select atom.element from atom, bond, cnt where atom.id = cnt.atom_id and bond.id = cnt.bond_id");
}

TEST_CASE("lexing errors are reported, other problems flag unsupported") {
  CHECK_THROWS_AS(parse_sql("SELECT 'abc FROM t"), LexError);
  CHECK_THROWS_AS(parse_sql("SELECT (a FROM t"), LexError);
  CHECK_THROWS_AS(parse_sql(""), std::invalid_argument);
  const auto upd = parse_sql("UPDATE t SET a = 1");
  CHECK(upd.unsupported);
  CHECK_FALSE(upd.select);
  const auto win = parse_sql("SELECT rank() OVER (ORDER BY a) FROM t WHERE b = 1");
  CHECK(win.unsupported);
  REQUIRE(win.select);
  CHECK(filter_texts(extract_subcomponents(win)) == std::vector<std::string>{"t.b = 1"});
}

TEST_CASE("extraction is deterministic") {
  const std::string sql = "SELECT a.x, b.y FROM a JOIN b ON a.id = b.aid WHERE a.z = 'q' GROUP BY b.y, a.x";
  CHECK(subs_of(sql) == subs_of(sql));
  CHECK(subs_of(sql).group_by == std::vector<std::string>{"a.x", "b.y"});
}

TEST_CASE("query log auto-detects line mode and collapses duplicates") {
  const auto records = parse_query_log(
      "SELECT a FROM t\n"
      "\n"
      "3\tSELECT b FROM t\n"
      "SELECT a FROM t;\n");
  REQUIRE(records.size() == 2);
  CHECK(records[0] == QueryRecord{"q1", "SELECT a FROM t", 2});
  CHECK(records[1] == QueryRecord{"q2", "SELECT b FROM t", 3});
}

TEST_CASE("query log auto-detects semicolon mode") {
  const auto records = parse_query_log(
      "-- header\n"
      "SELECT a\n  FROM t\n  WHERE x = ';';\n"
      "SELECT b FROM u;\n");
  REQUIRE(records.size() == 2);
  CHECK(records[0].text == "SELECT a\n  FROM t\n  WHERE x = ';'");
  CHECK(records[1].text == "SELECT b FROM u");
  CHECK(records[1].id == "q2");
}

TEST_CASE("batch parse skips malformed statements with one diagnostic each") {
  const std::vector<QueryRecord> records = {
      {"q1", "SELECT a FROM t", 1},
      {"q2", "SELECT 'oops FROM t", 1},
      {"q3", "SELECT (a FROM t", 1},
      {"q4", "SELECT b FROM u", 1},
  };
  Diagnostics diags;
  const auto parsed = parse_workload(records, diags);
  CHECK(parsed.size() == 2);
  CHECK(diags.count("lex_error") == 2);
  CHECK(parsed[0].record.id == "q1");
  CHECK(parsed[1].record.id == "q4");
}
