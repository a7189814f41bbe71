#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "store_builder.hpp"
#include "support.hpp"
#include "tailorsql/docs/store.hpp"
#include "tailorsql/embed/embedding.hpp"
#include "tailorsql/retrieve/retriever.hpp"
#include "tailorsql/retrieve/tokens.hpp"

using namespace tailorsql;
using namespace tailorsql::retrieve;
namespace rt = tailorsql::retrieve;
using docs::DocClass;
using test_support::at_cosine;
using test_support::DocSpec;
using test_support::make_store;

namespace {

const embed::Vector kQuestion{1.0, 0.0};

std::vector<std::string> ids(const std::vector<RetrievedDoc>& docs) {
  std::vector<std::string> out;
  for (const auto& d : docs) out.push_back(d.id);
  return out;
}

// Independent greedy: walk documents by score, take each one that still fits.
std::vector<std::size_t> greedy_oracle(std::vector<std::pair<double, std::size_t>> score_tokens, long budget) {
  std::vector<std::size_t> order(score_tokens.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score_tokens[a].first > score_tokens[b].first; });
  std::vector<std::size_t> taken;
  long used = 0;
  for (auto i : order) {
    if (used + static_cast<long>(score_tokens[i].second) <= budget) {
      used += static_cast<long>(score_tokens[i].second);
      taken.push_back(i);
    }
  }
  return taken;
}

}  // namespace

TEST_CASE("token counting splits punctuation") {
  CHECK(count_tokens("SELECT * FROM t") == 4);
  CHECK(count_tokens("") == 0);
  CHECK(count_tokens("a,b") == 3);
  CHECK(count_tokens("  spaced   out\n") == 2);
  // Additive over concatenation with a separator.
  CHECK(count_tokens("a,b c") == count_tokens("a,b") + count_tokens("c"));
  const TokenCounter custom([](std::string_view s) { return s.size(); });
  CHECK(custom("abc") == 3);
  CHECK_FALSE(custom.is_whitespace_mode());
  CHECK(TokenCounter{}("a,b") == 3);
}

TEST_CASE("zero hint budget retrieves no hints") {
  const docs::Store store(make_store({{DocClass::Table, 5, at_cosine(0.2)}, {DocClass::JoinHint, 1, at_cosine(0.99)}}));
  const auto r = rt::retrieve(kQuestion, {100, 100, 0, 200}, store, EmbeddingMode::Raw);
  CHECK(r.hints.empty());
  CHECK(r.tables.size() == 1);
}

TEST_CASE("higher score wins when only one document fits") {
  const docs::Store store(make_store({{DocClass::Table, 10, at_cosine(0.8)}, {DocClass::Table, 10, at_cosine(0.9)}}));
  const auto r = rt::retrieve(kQuestion, {10, 0, 0, 10}, store, EmbeddingMode::Raw);
  REQUIRE(r.tables.size() == 1);
  CHECK(r.tables[0].id == "table:01");
  CHECK(r.tables[0].score == Catch::Approx(0.9).margin(1e-6));
}

TEST_CASE("oversized documents are skipped and later ones still fit") {
  const docs::Store store(make_store({{DocClass::Column, 60, at_cosine(0.9)},
                                      {DocClass::Column, 50, at_cosine(0.8)},
                                      {DocClass::Column, 40, at_cosine(0.7)}}));
  const auto r = rt::retrieve(kQuestion, {0, 100, 0, 100}, store, EmbeddingMode::Raw);
  CHECK(ids(r.columns) == std::vector<std::string>{"column:00", "column:02"});
  CHECK(r.column_tokens == 100);
  const auto oracle = greedy_oracle({{0.9, 60}, {0.8, 50}, {0.7, 40}}, 100);
  CHECK(oracle == std::vector<std::size_t>{0, 2});
}

TEST_CASE("ties break by observed count, then id") {
  std::vector<Candidate> c{{0, "b", 0.5, 1, 1}, {1, "a", 0.5, 1, 1}, {2, "c", 0.5, 7, 1}};
  const auto picked = greedy_fill(c, 10);
  REQUIRE(picked.size() == 3);
  CHECK(picked[0].id == "c");
  CHECK(picked[1].id == "a");
  CHECK(picked[2].id == "b");
}

TEST_CASE("randomized retrieval respects budgets, rank dominance and the greedy oracle") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<DocSpec> specs;
    const auto n = 1 + rng() % 25;
    for (std::size_t i = 0; i < n; ++i) {
      specs.push_back({docs::kAllClasses[rng() % 5], static_cast<std::size_t>(1 + rng() % 60),
                       embed::Vector{unit(rng), unit(rng), unit(rng)}});
    }
    const docs::Store store(make_store(specs));
    const embed::Vector q{unit(rng), unit(rng), unit(rng)};
    const alloc::ContextAllocation a{static_cast<std::int64_t>(rng() % 150), static_cast<std::int64_t>(rng() % 150),
                                     static_cast<std::int64_t>(rng() % 150), 450};
    const auto r = rt::retrieve(q, a, store, EmbeddingMode::Raw);
    CHECK(static_cast<std::int64_t>(r.table_tokens) <= a.t_tbl);
    CHECK(static_cast<std::int64_t>(r.column_tokens) <= a.t_col);
    CHECK(static_cast<std::int64_t>(r.hint_tokens) <= a.t_hint);

    const std::array<std::pair<const std::vector<RetrievedDoc>*, std::int64_t>, 3> groups{
        {{&r.tables, a.t_tbl}, {&r.columns, a.t_col}, {&r.hints, a.t_hint}}};
    for (std::size_t g = 0; g < 3; ++g) {
      const auto& got = *groups[g].first;
      std::set<std::string> seen;
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(seen.insert(got[i].id).second);
        if (i > 0) CHECK(got[i - 1].score >= got[i].score);
      }
      // Oracle: recompute scores and fill directly.
      std::vector<std::pair<double, std::size_t>> st;
      std::vector<std::size_t> index;
      for (std::size_t i = 0; i < store.size(); ++i) {
        const auto cls = store.document(i).cls;
        const std::size_t group = cls == DocClass::Table ? 0 : cls == DocClass::Column ? 1 : 2;
        if (group != g) continue;
        const auto e = store.raw_embedding(i);
        double dot = 0, nq = 0, ne = 0;
        for (std::size_t k = 0; k < 3; ++k) {
          dot += q[k] * e[k];
          nq += q[k] * q[k];
          ne += double(e[k]) * double(e[k]);
        }
        st.push_back({dot / std::sqrt(nq * ne), store.document(i).token_count});
        index.push_back(i);
      }
      std::set<std::size_t> expected;
      for (auto k : greedy_oracle(st, groups[g].second)) expected.insert(index[k]);
      std::set<std::size_t> actual;
      for (const auto& d : got) actual.insert(d.index);
      CHECK(actual == expected);
      // Rank dominance: a better-scored document no larger than a retrieved
      // one is always retrieved too.
      for (std::size_t i = 0; i < st.size(); ++i) {
        for (std::size_t j = 0; j < st.size(); ++j) {
          if (st[i].first > st[j].first && st[i].second <= st[j].second && actual.count(index[j]) != 0) {
            CHECK(actual.count(index[i]) == 1);
          }
        }
      }
    }
  }
}

TEST_CASE("raw and tailored retrieval agree when nothing was logged") {
  serve::Config config;
  embed::MockEmbeddingProvider embedder;
  embed::MockGenerativeProvider generator;
  const auto catalog = test_support::load_catalog("molecules");
  const auto report = serve::build_store(catalog, {}, config, embedder, generator);
  const docs::Store store(report.data);
  for (const char* q : {"which bonds touch chlorine atoms", "lab cities", "molecule labels", "x"}) {
    const auto v = embedder.embed(q);
    const alloc::ContextAllocation a{300, 100, 100, 500};
    const auto raw = rt::retrieve(v, a, store, EmbeddingMode::Raw);
    const auto tailored = rt::retrieve(v, a, store, EmbeddingMode::Tailored);
    CHECK(ids(raw.tables) == ids(tailored.tables));
    CHECK(ids(raw.columns) == ids(tailored.columns));
    CHECK(raw.hints.empty());
    CHECK(tailored.hints.empty());
  }
}

TEST_CASE("retrieval is deterministic") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<DocSpec> specs;
  for (int i = 0; i < 30; ++i) {
    specs.push_back({docs::kAllClasses[i % 5], static_cast<std::size_t>(1 + i % 7), embed::Vector{unit(rng), unit(rng)}});
  }
  const docs::Store store(make_store(specs));
  const alloc::ContextAllocation a{20, 20, 20, 60};
  CHECK(rt::retrieve(kQuestion, a, store, EmbeddingMode::Tailored) == rt::retrieve(kQuestion, a, store, EmbeddingMode::Tailored));
}

TEST_CASE("generic retrieval reads only schema documents and raw embeddings") {
  std::vector<DocSpec> specs{{DocClass::Table, 5, at_cosine(0.9)},
                             {DocClass::Column, 5, at_cosine(0.7)},
                             {DocClass::JoinHint, 1, at_cosine(1.0)},
                             {DocClass::FilterHint, 1, at_cosine(1.0)}};
  auto data = make_store(specs);
  data.allocation = alloc::AllocationRecord{};
  const docs::Store store(std::move(data));
  store.reset_access_counts();
  const auto r = retrieve_generic(kQuestion, 8, store);
  const auto counts = store.access_counts();
  CHECK(counts.hints == 0);
  CHECK(counts.tailored == 0);
  CHECK(counts.allocation == 0);
  CHECK(counts.weights == 0);
  CHECK(r.hints.empty());
  CHECK(ids(r.tables) == std::vector<std::string>{"table:00"});
  CHECK(r.columns.empty());  // 5 + 5 exceeds the pooled budget of 8
}

TEST_CASE("empty store gives an empty result") {
  const docs::Store store;
  CHECK(rt::retrieve(kQuestion, {10, 10, 10, 30}, store, EmbeddingMode::Raw).all().empty());
  CHECK(retrieve_generic(kQuestion, 10, store).all().empty());
}
