#include <catch_amalgamated.hpp>

#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include "store_builder.hpp"
#include "support.hpp"
#include "tailorsql/errors.hpp"
#include "tailorsql/serve/bandit.hpp"
#include "tailorsql/serve/extract.hpp"
#include "tailorsql/serve/http.hpp"
#include "tailorsql/serve/prompt.hpp"
#include "tailorsql/serve/service.hpp"

using namespace tailorsql;
using namespace tailorsql::serve;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

class DownEmbedder final : public embed::EmbeddingProvider {
 public:
  [[nodiscard]] std::size_t dimension() const override { return 256; }
  [[nodiscard]] std::string name() const override { return "down"; }
  embed::Vector embed(std::string_view) override { throw ProviderUnavailable("embedding endpoint unreachable"); }
};

Config quick_config() {
  Config c;
  c.retry_backoff_ms = 0;
  c.bo_budget = 8;
  return c;
}

std::chrono::system_clock::time_point fixed_time() {
  return std::chrono::system_clock::time_point(std::chrono::milliseconds(1760000000123));
}

std::shared_ptr<const docs::Store> molecule_store(const Config& config = quick_config()) {
  embed::MockEmbeddingProvider e(config.dimension);
  embed::MockGenerativeProvider g;
  return std::make_shared<const docs::Store>(
      build_store_from_files(test_support::fixture_files("molecules"), config, e, g).data);
}

std::unique_ptr<Service> make_service(std::shared_ptr<const docs::Store> store, Config config = quick_config(),
                                      std::unique_ptr<embed::EmbeddingProvider> embedder = nullptr) {
  if (!embedder) embedder = std::make_unique<embed::MockEmbeddingProvider>(config.dimension);
  return std::make_unique<Service>(std::move(store), config, std::move(embedder),
                                   std::make_unique<embed::MockGenerativeProvider>(), fixed_time);
}

const std::string kMoleculeQuestion = "What is the bond type of each bond that involves a chlorine atom?";

}  // namespace

TEST_CASE("prompt with no retrieved documents has instructions and question only") {
  const docs::Store store;
  const auto p = assemble_prompt("How many atoms?", {}, store);
  REQUIRE(p.sections.size() == 2);
  CHECK(p.sections[0].name == "instructions");
  CHECK(p.sections[1].name == "question");
  CHECK(p.text.find("How many atoms?") != std::string::npos);
  std::size_t sum = 0;
  for (const auto& s : p.sections) sum += s.tokens;
  CHECK(p.token_count == sum);
  CHECK(p.template_id == default_prompt_template().id);
}

TEST_CASE("prompt rendering is deterministic and annotates hint counts") {
  const auto store = molecule_store();
  const auto& s = *store;
  embed::MockEmbeddingProvider e;
  const auto r =
      retrieve::retrieve(kMoleculeQuestion, {400, 400, 400, 1200}, s, retrieve::EmbeddingMode::Tailored, e);
  const auto a = assemble_prompt(kMoleculeQuestion, r, s);
  const auto b = assemble_prompt(kMoleculeQuestion, r, s);
  CHECK(a.text == b.text);
  CHECK(a.text.find("observed 3 times in past queries") != std::string::npos);

  // Section order is fixed.
  std::vector<std::string> names;
  for (const auto& sec : a.sections) names.push_back(sec.name);
  CHECK(names == std::vector<std::string>{"instructions", "tables", "columns", "hints", "question"});
  std::size_t sum = 0;
  for (const auto& sec : a.sections) sum += sec.tokens;
  CHECK(a.token_count == sum);
}

TEST_CASE("a join hint observed twice says so") {
  test_support::DocSpec spec{docs::DocClass::JoinHint, 4, test_support::at_cosine(1.0), {}, 2};
  const docs::Store store(test_support::make_store({spec}));
  const auto r = retrieve::retrieve({1.0, 0.0}, {0, 0, 10, 10}, store, retrieve::EmbeddingMode::Raw);
  REQUIRE(r.hints.size() == 1);
  CHECK(assemble_prompt("q", r, store).text.find("observed 2 times") != std::string::npos);
}

TEST_CASE("prompt templates parse and reject missing sections") {
  const auto t = parse_prompt_template(
      "[id]\nt1\n[instructions]\nDo it.\n[tables]\nT:\n[columns]\nC:\n[hints]\nH:\n[question]\nQ:\n");
  CHECK(t.id == "t1");
  CHECK(t.instructions == "Do it.");
  CHECK_THROWS_AS(parse_prompt_template("[id]\nx\n[instructions]\nDo it.\n"), std::invalid_argument);
}

TEST_CASE("SQL extraction") {
  CHECK(extract_sql("```sql\nSELECT 1\n```").sql == "SELECT 1");
  CHECK(extract_sql("```sql\nSELECT 1\n```").found);
  CHECK(extract_sql("SELECT a FROM t").sql == "SELECT a FROM t");
  CHECK(extract_sql("SELECT a FROM t").found);
  CHECK(extract_sql("Here you go: SELECT a FROM t; hope it helps").sql == "SELECT a FROM t");
  CHECK(extract_sql("WITH x AS (SELECT 1) SELECT * FROM x").found);
  const auto none = extract_sql("I cannot answer");
  CHECK_FALSE(none.found);
  CHECK(none.sql == "I cannot answer");
}

TEST_CASE("bandit selection probability follows the epsilon-greedy rule") {
  std::mt19937_64 rng(2024);
  int specialized = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) specialized += select_pipeline(0.8, 0.5, 0.1, rng) == Pipeline::Specialized;
  const double freq = double(specialized) / n;
  CHECK(freq >= 0.945);
  CHECK(freq <= 0.955);

  int tie = 0;
  for (int i = 0; i < n; ++i) tie += select_pipeline(kEmptyWindowAverage, kEmptyWindowAverage, 0.1, rng) ==
                                     Pipeline::Specialized;
  CHECK(double(tie) / n == Catch::Approx(0.5).margin(0.01));

  // ε = 0 is pure exploitation.
  for (int i = 0; i < 1000; ++i) CHECK(select_pipeline(0.2, 0.6, 0.0, rng) == Pipeline::Generic);
}

TEST_CASE("bandit windows evict the oldest reward") {
  BanditState b(0.1, 3, 1);
  CHECK(b.average(Pipeline::Specialized) == kEmptyWindowAverage);
  b.record(Pipeline::Specialized, true);
  b.record(Pipeline::Specialized, false);
  b.record(Pipeline::Specialized, true);
  b.record(Pipeline::Specialized, false);
  CHECK(std::vector<std::uint8_t>(b.window(Pipeline::Specialized).begin(), b.window(Pipeline::Specialized).end()) ==
        std::vector<std::uint8_t>{0, 1, 0});
  CHECK(b.average(Pipeline::Specialized) == Catch::Approx(1.0 / 3));
  CHECK(b.count(Pipeline::Generic) == 0);
  b.record(Pipeline::Generic, true);
  CHECK(b.average(Pipeline::Generic) == 1.0);
  b.reset();
  CHECK(b.count(Pipeline::Specialized) == 0);
  CHECK(b.count(Pipeline::Generic) == 0);
  CHECK(b.epsilon() == 0.1);
  CHECK(b.window_size() == 3);
}

TEST_CASE("bandit averages depend only on the last W rewards") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 1 + rng() % 20;
    std::vector<bool> tail(w);
    for (auto&& t : tail) t = rng() % 2;
    BanditState a(0.1, w, 1), b(0.1, w, 2);
    for (std::size_t i = rng() % 30; i > 0; --i) a.record(Pipeline::Generic, rng() % 2);
    for (std::size_t i = rng() % 30; i > 0; --i) b.record(Pipeline::Generic, rng() % 2);
    for (bool t : tail) {
      a.record(Pipeline::Generic, t);
      b.record(Pipeline::Generic, t);
    }
    CHECK(a.average(Pipeline::Generic) == b.average(Pipeline::Generic));
    CHECK(a.count(Pipeline::Generic) == w);
  }
}

TEST_CASE("pipeline names round trip") {
  CHECK(pipeline_from_string(to_string(Pipeline::Specialized)) == Pipeline::Specialized);
  CHECK(pipeline_from_string(to_string(Pipeline::Generic)) == Pipeline::Generic);
  CHECK_FALSE(pipeline_from_string("auto").has_value());
}

TEST_CASE("service answers deterministically") {
  const auto store = molecule_store();
  auto a = make_service(store);
  auto b = make_service(store);
  for (const char* q : {"Which molecules are labelled +?", "bond types of chlorine atoms", "lab cities"}) {
    CHECK(to_json(a->answer(q)) == to_json(b->answer(q)));
  }
  const auto rec = a->answer("x");
  CHECK(rec.question_id == "a4");
  CHECK(to_json(rec)["asked_at"] == "2025-10-09T08:53:20.123Z");
}

TEST_CASE("generic arm answers about a never-logged table from schema documents") {
  auto svc = make_service(molecule_store());
  const auto rec = svc->answer("Which city is each laboratory located in?", Pipeline::Generic);
  CHECK(rec.pipeline == Pipeline::Generic);
  CHECK(rec.forced);
  CHECK(rec.retrieval.hints.empty());
  REQUIRE_FALSE(rec.retrieval.tables.empty());
  CHECK(rec.retrieval.tables.front().id == "table:laboratory");
  CHECK(rec.sql_found);
  CHECK(rec.sql == "SELECT * FROM laboratory");
}

TEST_CASE("forced specialized arm carries the atom-cnt-bond join hint") {
  auto svc = make_service(molecule_store());
  const auto spec = svc->answer(kMoleculeQuestion, Pipeline::Specialized);
  CHECK(spec.prompt.find("Join path over tables atom, bond, cnt") != std::string::npos);
  CHECK(spec.sql_found);
  CHECK(canonical_match(spec.sql,
                        "SELECT * FROM atom, bond, cnt WHERE atom.id = cnt.atom_id AND bond.id = cnt.bond_id"));
  const auto gen = svc->answer(kMoleculeQuestion, Pipeline::Generic);
  CHECK(gen.prompt.find("Join path") == std::string::npos);
}

TEST_CASE("generic answers leave tailored data, hints and allocation untouched") {
  const auto store = molecule_store();
  auto svc = make_service(store);
  store->reset_access_counts();
  for (int i = 0; i < 5; ++i) svc->answer("atoms and bonds", Pipeline::Generic);
  const auto c = store->access_counts();
  CHECK(c.tailored == 0);
  CHECK(c.hints == 0);
  CHECK(c.allocation == 0);
  svc->answer("atoms and bonds", Pipeline::Specialized);
  CHECK(store->access_counts().tailored > 0);
}

TEST_CASE("feedback updates the answering arm once") {
  Config cfg = quick_config();
  cfg.window = 3;
  auto svc = make_service(molecule_store(cfg), cfg);
  const auto s = svc->answer("q1", Pipeline::Specialized);
  const auto g = svc->answer("q2", Pipeline::Generic);
  svc->record_feedback(s.question_id, true);
  svc->record_feedback(g.question_id, false);
  CHECK_THROWS_AS(svc->record_feedback(s.question_id, false), DuplicateFeedback);
  CHECK_THROWS_AS(svc->record_feedback("a999", true), UnknownQuestion);
  const auto st = svc->stats();
  CHECK(st["arms"]["specialized"]["count"] == 1);
  CHECK(st["arms"]["specialized"]["avg"] == 1.0);
  CHECK(st["arms"]["generic"]["count"] == 1);
  CHECK(st["arms"]["generic"]["avg"] == 0.0);
  CHECK(st["window"] == 3);
  CHECK(svc->find(s.question_id)->feedback == true);
  // Unanswered questions contribute nothing.
  svc->answer("q3");
  CHECK(svc->stats()["arms"]["specialized"]["count"].get<int>() + svc->stats()["arms"]["generic"]["count"].get<int>() ==
        2);
}

TEST_CASE("rebuild with unchanged inputs is byte-identical and clears rewards") {
  const auto dir = test_support::temp_dir("rebuild");
  const auto live = (dir / "store").string();
  const Config cfg = quick_config();
  embed::MockEmbeddingProvider e;
  embed::MockGenerativeProvider g;
  auto first = build_store_from_files(test_support::fixture_files("molecules"), cfg, e, g);
  first.data.manifest = docs::persist_store(first.data, live);
  const auto before = test_support::directory_bytes(live);

  auto svc = make_service(std::make_shared<const docs::Store>(docs::load_store(live)), cfg);
  svc->set_store_dir(live);
  const auto old_answer = svc->answer("q", Pipeline::Specialized);
  svc->record_feedback(svc->answer("q", Pipeline::Generic).question_id, true);
  CHECK(svc->stats()["arms"]["generic"]["count"] == 1);

  svc->rebuild();
  CHECK(test_support::directory_bytes(live) == before);
  CHECK(svc->generation() == 1);
  CHECK(svc->stats()["arms"]["generic"]["count"] == 0);
  CHECK(svc->stats()["arms"]["specialized"]["count"] == 0);
  CHECK_FALSE(fs::exists(live + ".staging"));

  // Feedback for a pre-rebuild answer is kept on the record but not counted.
  svc->record_feedback(old_answer.question_id, true);
  CHECK(svc->stats()["arms"]["specialized"]["count"] == 0);
  CHECK(svc->find(old_answer.question_id)->feedback == true);
  fs::remove_all(dir);
}

TEST_CASE("a corrupt log line is skipped with a diagnostic") {
  const auto dir = test_support::temp_dir("corrupt");
  const auto log = (dir / "log.sql").string();
  {
    std::ofstream out(log);
    out << test_support::read_fixture("molecules/log.sql") << "SELECT 'unterminated FROM atom\n";
  }
  auto files = test_support::fixture_files("molecules");
  files.logs = log;
  embed::MockEmbeddingProvider e;
  embed::MockGenerativeProvider g;
  const auto report = build_store_from_files(files, quick_config(), e, g);
  CHECK(report.parsed_queries == 6);
  CHECK(report.diagnostics.count("lex_error") == 1);

  auto svc = make_service(molecule_store());
  const auto m = svc->rebuild(files);
  CHECK(m.log_query_ids.size() == 6);
  fs::remove_all(dir);
}

TEST_CASE("a failed rebuild keeps the old store and rewards") {
  auto svc = make_service(molecule_store());
  svc->record_feedback(svc->answer("q", Pipeline::Generic).question_id, true);
  const auto before = svc->store();
  auto files = test_support::fixture_files("molecules");
  files.schema = "/nonexistent/schema.sql";
  CHECK_THROWS(svc->rebuild(files));
  CHECK(svc->store() == before);
  CHECK(svc->generation() == 0);
  CHECK(svc->stats()["arms"]["generic"]["count"] == 1);
}

TEST_CASE("a stores without an allocation serves the default point") {
  const docs::Store store;
  Config cfg;
  cfg.tokens = 1200;
  CHECK(serving_allocation(store, cfg) == alloc::reparam_to_tokens(kDefaultReparamPoint, 1200));
  cfg.cap = 300;
  CHECK(serving_allocation(store, cfg).total() <= 300);
}

TEST_CASE("config loading layers defaults, file and environment") {
  const auto dir = test_support::temp_dir("config");
  const auto path = (dir / "c.json").string();
  {
    std::ofstream out(path);
    out << R"({"epsilon": 0.2, "window": 50, "embedding": {"kind": "http", "endpoint": "http://x", "model": "m"}})";
  }
  std::map<std::string, std::string> env{{"TAILOR_WINDOW", "70"}, {"TAILOR_GENERATIVE_MODEL", "123"},
                                         {"TAILOR_SEED", "9"}};
  const auto lookup = [&](const std::string& k) -> std::optional<std::string> {
    auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  const auto c = load_config(path, lookup);
  CHECK(c.epsilon == 0.2);
  CHECK(c.window == 70);
  CHECK(c.seed == 9);
  CHECK(c.embedding.kind == "http");
  CHECK(c.embedding.endpoint == "http://x");
  CHECK(c.generative.model == "123");
  CHECK(c.tokens == Config{}.tokens);
  CHECK(config_from_json(to_json(c)).window == 70);

  const auto none = [](const std::string&) -> std::optional<std::string> { return std::nullopt; };
  CHECK(load_config(std::nullopt, none).epsilon == 0.1);

  CHECK_THROWS_AS(config_from_json(json{{"epsilon", 1.5}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"window", 0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"bo_budget", 4}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"colour", "red"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"epsilon", "high"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"objective", "vibes"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"embedding", {{"kind", "grpc"}}}}), ConfigError);
  env["TAILOR_EPSILON"] = "2";
  CHECK_THROWS_AS(load_config(std::nullopt, lookup), ConfigError);

  Config http_cfg;
  http_cfg.embedding.kind = "http";
  CHECK_THROWS_AS(make_embedding_provider(http_cfg, none), ConfigError);
  CHECK(make_embedding_provider(Config{}, none)->name() == "mock");
  fs::remove_all(dir);
}

namespace {

struct RunningServer {
  explicit RunningServer(Service& svc) : server(svc) {
    port = server.bind_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    for (int i = 0; i < 200 && !server.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~RunningServer() {
    server.stop();
    thread.join();
  }
  HttpServer server;
  int port = -1;
  std::thread thread;
};

json body(const httplib::Result& r) { return json::parse(r->body); }

}  // namespace

TEST_CASE("HTTP API round trip") {
  const auto dir = test_support::temp_dir("http");
  const auto live = (dir / "store").string();
  Config cfg = quick_config();
  embed::MockEmbeddingProvider e;
  embed::MockGenerativeProvider g;
  auto built = build_store_from_files(test_support::fixture_files("molecules"), cfg, e, g);
  built.data.manifest = docs::persist_store(built.data, live);
  auto svc = make_service(std::make_shared<const docs::Store>(std::move(built.data)), cfg);
  svc->set_store_dir(live);
  RunningServer rs(*svc);
  REQUIRE(rs.port > 0);
  httplib::Client cli("127.0.0.1", rs.port);

  auto health = cli.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(body(health)["status"] == "ok");
  CHECK(body(health)["documents"] == svc->store()->size());

  auto ask = cli.Post("/ask", json{{"question", kMoleculeQuestion}, {"arm", "specialized"}}.dump(), "application/json");
  REQUIRE(ask);
  CHECK(ask->status == 200);
  CHECK(ask->get_header_value("Access-Control-Allow-Origin") == "*");
  const auto answer = body(ask);
  CHECK(answer["pipeline_used"] == "specialized");
  CHECK(answer["question_id"] == "a1");
  CHECK(answer["prompt_tokens"].get<int>() > 0);
  REQUIRE(answer["documents"].is_array());
  bool has_hint = false;
  for (const auto& d : answer["documents"]) {
    CHECK(d.contains("id"));
    CHECK(d.contains("score"));
    CHECK(d.contains("tokens"));
    has_hint = has_hint || d["class"] == "join_hint";
  }
  CHECK(has_hint);

  auto auto_ask = cli.Post("/ask", json{{"question", "molecule labels"}}.dump(), "application/json");
  REQUIRE(auto_ask);
  CHECK(auto_ask->status == 200);

  auto fb = cli.Post("/feedback", json{{"question_id", "a1"}, {"useful", true}}.dump(), "application/json");
  REQUIRE(fb);
  CHECK(fb->status == 200);
  CHECK(body(fb)["ok"] == true);
  auto dup = cli.Post("/feedback", json{{"question_id", "a1"}, {"useful", false}}.dump(), "application/json");
  CHECK(dup->status == 409);
  CHECK(body(dup)["error"].is_string());
  auto unknown = cli.Post("/feedback", json{{"question_id", "zz"}, {"useful", true}}.dump(), "application/json");
  CHECK(unknown->status == 404);
  CHECK(cli.Post("/feedback", "{not json", "application/json")->status == 400);
  CHECK(cli.Post("/feedback", json{{"question_id", "a2"}}.dump(), "application/json")->status == 400);
  CHECK(cli.Post("/ask", json{{"question", 3}}.dump(), "application/json")->status == 400);
  CHECK(cli.Post("/ask", json{{"question", "x"}, {"arm", "best"}}.dump(), "application/json")->status == 400);

  auto stats = cli.Get("/stats");
  REQUIRE(stats);
  const auto st = body(stats);
  CHECK(st["epsilon"] == 0.1);
  CHECK(st["window"] == 100);
  CHECK(st["arms"]["specialized"]["count"] == 1);
  CHECK(st["arms"]["specialized"]["avg"] == 1.0);
  CHECK(st["allocation"].is_object());
  CHECK(st["weights"].contains("synthq"));

  auto options = cli.Options("/ask");
  REQUIRE(options);
  CHECK(options->status == 204);
  CHECK(options->has_header("Access-Control-Allow-Methods"));

  auto rebuild = cli.Post("/rebuild", "", "application/json");
  REQUIRE(rebuild);
  CHECK(rebuild->status == 200);
  CHECK(body(rebuild)["manifest"]["rows"] == svc->store()->size());
  CHECK(body(cli.Get("/stats"))["arms"]["specialized"]["count"] == 0);
  fs::remove_all(dir);
}

TEST_CASE("HTTP API reports an unavailable provider as 503") {
  auto svc = make_service(molecule_store(), quick_config(), std::make_unique<DownEmbedder>());
  RunningServer rs(*svc);
  httplib::Client cli("127.0.0.1", rs.port);
  auto r = cli.Post("/ask", json{{"question", "atoms"}}.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 503);
  CHECK(body(r)["error"].is_string());
}

TEST_CASE("HTTP embedding provider talks to an OpenAI-style endpoint") {
  httplib::Server fake;
  std::atomic<int> hits{0};
  fake.Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    const auto in = json::parse(req.body);
    CHECK(in["model"] == "m1");
    CHECK(req.get_header_value("Authorization") == "Bearer k");
    res.set_content(json{{"data", {{{"embedding", {3.0, 4.0}}}}}}.dump(), "application/json");
  });
  const int port = fake.bind_to_any_port("127.0.0.1");
  std::thread t([&] { fake.listen_after_bind(); });
  fake.wait_until_ready();
  embed::HttpEmbeddingProvider p({"http://127.0.0.1:" + std::to_string(port), "m1", "k", std::chrono::seconds(5)}, 2);
  const auto v = p.embed("hello");
  REQUIRE(v.size() == 2);
  // Returned verbatim; cosine scoring does not need unit vectors.
  CHECK(v[0] == 3.0);
  CHECK(v[1] == 4.0);
  CHECK(hits == 1);

  embed::HttpEmbeddingProvider wrong_dim({"http://127.0.0.1:" + std::to_string(port), "m1", "k", std::chrono::seconds(5)},
                                         3);
  // A wrong dimension is a configuration fault, so it is not retried.
  bool retryable = false;
  try {
    wrong_dim.embed("hello");
  } catch (const ProviderUnavailable&) {
    retryable = true;
  } catch (const Error&) {
  }
  CHECK_FALSE(retryable);
  CHECK_THROWS_AS(wrong_dim.embed("hello"), Error);
  fake.stop();
  t.join();

  embed::HttpEmbeddingProvider closed({"http://127.0.0.1:" + std::to_string(port), "m1", "", std::chrono::seconds(1)},
                                      2);
  CHECK_THROWS_AS(closed.embed("hello"), ProviderUnavailable);
}
