#include "tailorsql/eval/split.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "tailorsql/errors.hpp"
#include "tailorsql/sql/parser.hpp"

namespace tailorsql::eval {

using nlohmann::json;

std::vector<QuestionSqlPair> read_pairs(std::string_view jsonl, Diagnostics& diagnostics) {
  std::vector<QuestionSqlPair> out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto where = "line " + std::to_string(line_no);
    try {
      const auto j = json::parse(line);
      QuestionSqlPair p{j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump(),
                        j.at("question").get<std::string>(), j.at("sql").get<std::string>()};
      if (!seen.insert(p.id).second) {
        diagnostics.add("pairs_duplicate_id", p.id, where + ": id already used");
        continue;
      }
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      diagnostics.add("pairs_invalid", where, e.what());
    }
  }
  return out;
}

std::string write_pairs(const std::vector<QuestionSqlPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += json{{"id", p.id}, {"question", p.question}, {"sql", p.sql}}.dump();
    out += '\n';
  }
  return out;
}

std::vector<ParsedPair> parse_pairs(const std::vector<QuestionSqlPair>& pairs, Diagnostics& diagnostics) {
  std::vector<ParsedPair> out;
  for (const auto& p : pairs) {
    try {
      out.push_back({p, sql::extract_subcomponents(sql::parse_sql(p.sql))});
    } catch (const LexError& e) {
      diagnostics.add("lex_error", p.id, e.what());
    } catch (const std::invalid_argument& e) {
      diagnostics.add("lex_error", p.id, e.what());
    }
  }
  return out;
}

std::string_view to_string(SplitMode m) { return m == SplitMode::Random ? "random" : "disjoint"; }

std::optional<SplitMode> split_mode_from_string(std::string_view s) {
  if (s == "random") return SplitMode::Random;
  if (s == "disjoint") return SplitMode::Disjoint;
  return std::nullopt;
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

EvalSplit split_workload(const std::vector<ParsedPair>& pairs, SplitMode mode, std::uint64_t seed) {
  if (pairs.size() < 2) throw std::invalid_argument("a split needs at least 2 pairs");
  EvalSplit split;
  split.mode = mode;
  split.seed = seed;
  if (mode == SplitMode::Random) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    for (const auto& p : pairs) (coin(rng) ? split.log_ids : split.test_ids).push_back(p.pair.id);
    return split;
  }

  UnionFind uf(pairs.size());
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (const auto& t : pairs[i].subs.tables) {
      auto [it, inserted] = owner.emplace(t, i);
      if (!inserted) uf.unite(i, it->second);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < pairs.size(); ++i) components[uf.find(i)].push_back(i);
  if (components.size() < 2) throw DisjointImpossible("all pairs share tables through one connected component");

  std::vector<std::vector<std::size_t>> ordered;
  for (auto& [root, members] : components) ordered.push_back(std::move(members));
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::size_t> log_side, test_side;
  for (const auto& c : ordered) {
    auto& side = log_side.size() <= test_side.size() ? log_side : test_side;
    side.insert(side.end(), c.begin(), c.end());
  }
  std::sort(log_side.begin(), log_side.end());
  std::sort(test_side.begin(), test_side.end());
  for (auto i : log_side) split.log_ids.push_back(pairs[i].pair.id);
  for (auto i : test_side) split.test_ids.push_back(pairs[i].pair.id);

  const auto a = split_tables(pairs, split.log_ids);
  const auto b = split_tables(pairs, split.test_ids);
  for (const auto& t : a) {
    if (b.count(t) != 0) throw std::logic_error("disjoint split shares table " + t);
  }
  return split;
}

std::set<std::string> split_tables(const std::vector<ParsedPair>& pairs, const std::vector<std::string>& ids) {
  const std::set<std::string> wanted(ids.begin(), ids.end());
  std::set<std::string> out;
  for (const auto& p : pairs) {
    if (wanted.count(p.pair.id) != 0) out.insert(p.subs.tables.begin(), p.subs.tables.end());
  }
  return out;
}

std::vector<sql::QueryRecord> log_records(const std::vector<ParsedPair>& pairs, const std::vector<std::string>& ids) {
  const std::set<std::string> wanted(ids.begin(), ids.end());
  std::vector<sql::QueryRecord> out;
  for (const auto& p : pairs) {
    if (wanted.count(p.pair.id) != 0) out.push_back({p.pair.id, p.pair.sql, 1});
  }
  return out;
}

}  // namespace tailorsql::eval
