// Command-line front end: build, ask, serve, eval, gen-corpus.
#include <csignal>
#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "tailorsql/docs/catalog.hpp"
#include "tailorsql/docs/store.hpp"
#include "tailorsql/errors.hpp"
#include "tailorsql/eval/corpus.hpp"
#include "tailorsql/eval/report.hpp"
#include "tailorsql/eval/split.hpp"
#include "tailorsql/serve/build.hpp"
#include "tailorsql/serve/config.hpp"
#include "tailorsql/serve/http.hpp"
#include "tailorsql/serve/service.hpp"
#include "tailorsql/text.hpp"

using namespace tailorsql;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void print_diagnostics(const Diagnostics& diags, bool verbose) {
  if (diags.empty()) return;
  std::map<std::string, std::size_t> counts;
  for (const auto& d : diags.items()) {
    ++counts[d.code];
    if (verbose) std::cerr << "  " << d.code << " [" << d.subject << "] " << d.message << "\n";
  }
  std::cerr << "diagnostics:";
  for (const auto& [code, n] : counts) std::cerr << " " << code << "=" << n;
  std::cerr << "\n";
}

serve::Config load(const std::string& config_path) {
  return serve::load_config(config_path.empty() ? std::nullopt : std::optional(config_path));
}

serve::Service make_service(const std::string& store_dir, const serve::Config& config) {
  auto data = docs::load_store(store_dir);
  auto store = std::make_shared<const docs::Store>(std::move(data));
  return serve::Service(store, config, serve::make_embedding_provider(config),
                        serve::make_generative_provider(config));
}

serve::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workload-tailored retrieval for NL2SQL"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  bool verbose = false;
  app.add_option("--config", config_path, "JSON config file (TAILOR_* environment variables override it)");
  app.add_flag("-v,--verbose", verbose, "Print every diagnostic");

  // build
  auto* build = app.add_subcommand("build", "Build a document store from a schema and a query log");
  serve::BuildFiles files;
  std::string stats_path, out_dir;
  std::optional<std::int64_t> tokens;
  std::optional<std::uint64_t> seed;
  build->add_option("--schema", files.schema, "CREATE TABLE statements")->required()->check(CLI::ExistingFile);
  build->add_option("--stats", stats_path, "Column value statistics (JSON)")->check(CLI::ExistingFile);
  build->add_option("--logs", files.logs, "SQL query log")->required()->check(CLI::ExistingFile);
  build->add_option("--out", out_dir, "Store directory")->required();
  build->add_option("--tokens", tokens, "Total prompt budget T");
  build->add_option("--seed", seed, "Allocator seed");

  // ask
  auto* ask = app.add_subcommand("ask", "Answer one question");
  std::string question, store_dir, arm = "auto";
  bool as_json = false, show_prompt = false;
  ask->add_option("question", question, "Natural-language question")->required();
  ask->add_option("--store", store_dir, "Store directory")->required()->check(CLI::ExistingDirectory);
  ask->add_option("--arm", arm, "auto, specialized or generic")
      ->check(CLI::IsMember({"auto", "specialized", "generic"}));
  ask->add_flag("--json", as_json, "Print the answer record as JSON");
  ask->add_flag("--prompt", show_prompt, "Also print the prompt");

  // serve
  auto* srv = app.add_subcommand("serve", "Serve the HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  srv->add_option("--store", store_dir, "Store directory")->required()->check(CLI::ExistingDirectory);
  srv->add_option("--port", port, "Port");
  srv->add_option("--host", host, "Bind address");

  // eval
  auto* ev = app.add_subcommand("eval", "Split question/SQL pairs, build a log-side store and score the test side");
  std::string pairs_path, split_name = "random", ks_text = "1,5", report_path = "eval_report.json", eval_store_dir;
  std::uint64_t split_seed = 42;
  bool timing = false;
  ev->add_option("--store", store_dir, "Store whose recorded schema/stats inputs are used")
      ->required()
      ->check(CLI::ExistingDirectory);
  ev->add_option("--pairs", pairs_path, "Question/SQL pairs (JSON lines)")->required()->check(CLI::ExistingFile);
  ev->add_option("--split", split_name, "random or disjoint")->check(CLI::IsMember({"random", "disjoint"}));
  ev->add_option("--k", ks_text, "Comma-separated K values");
  ev->add_option("--seed", split_seed, "Split seed");
  ev->add_option("--report", report_path, "Report JSON path");
  ev->add_option("--eval-store", eval_store_dir, "Also persist the log-side store here");
  ev->add_flag("--timing", timing, "Report mean retrieval wall time");

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "Write the synthetic evaluation corpus");
  eval::CorpusConfig corpus_config;
  std::string corpus_dir;
  gen->add_option("--out", corpus_dir, "Output directory")->required();
  gen->add_option("--seed", corpus_config.seed, "Generator seed");
  gen->add_option("--log-queries", corpus_config.log_queries, "Logged queries");
  gen->add_option("--test-pairs", corpus_config.test_pairs, "Test pairs");
  gen->add_option("--malformed", corpus_config.malformed, "Malformed statements mixed into the log");

  CLI11_PARSE(app, argc, argv);

  try {
    auto config = load(config_path);
    if (tokens) config.tokens = *tokens;
    if (seed) config.seed = *seed;

    if (*build) {
      if (!stats_path.empty()) files.stats = stats_path;
      auto embedder = serve::make_embedding_provider(config);
      auto generator = serve::make_generative_provider(config);
      auto report = serve::build_store_from_files(files, config, *embedder, *generator);
      const auto manifest = docs::persist_store(report.data, out_dir);
      print_diagnostics(report.diagnostics, verbose);
      const auto& w = report.data.weights;
      std::cout << "documents: " << manifest.rows << " (" << report.parsed_queries << " parsed queries, "
                << report.synthetic_questions << " synthetic questions)\n"
                << "weights: raw=" << w[0] << " cooccur=" << w[1] << " sql=" << w[2] << " synthq=" << w[3] << "\n";
      if (const auto& a = report.data.allocation) {
        std::cout << "allocation: t_tbl=" << a->allocation.t_tbl << " t_col=" << a->allocation.t_col
                  << " t_hint=" << a->allocation.t_hint << " T=" << a->allocation.T << " (" << a->objective_kind
                  << " " << a->score << ")\n";
      }
      std::cout << "store: " << out_dir << "\n";
      return 0;
    }

    if (*ask) {
      auto service = make_service(store_dir, config);
      std::optional<serve::Pipeline> forced;
      if (arm != "auto") forced = serve::pipeline_from_string(arm);
      const auto answer = service.answer(question, forced);
      if (as_json) {
        auto j = serve::to_json(answer);
        if (show_prompt) j["prompt"] = answer.prompt;
        std::cout << j.dump(2) << "\n";
      } else {
        if (show_prompt) std::cout << answer.prompt << "\n";
        std::cout << "-- pipeline: " << serve::to_string(answer.pipeline) << "\n"
                  << (answer.sql_found ? "" : "-- no SQL found in the response\n") << answer.sql << "\n";
      }
      return answer.sql_found ? 0 : 2;
    }

    if (*srv) {
      auto service = make_service(store_dir, config);
      service.set_store_dir(store_dir);
      serve::HttpServer server(service);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }

    if (*ev) {
      std::vector<std::size_t> ks;
      for (const auto& part : CLI::detail::split(ks_text, ',')) {
        const auto t = text::trim(part);
        if (!t.empty()) ks.push_back(static_cast<std::size_t>(std::stoul(std::string(t))));
      }
      if (ks.empty()) throw ConfigError("--k needs at least one value");

      const auto base = docs::load_store(store_dir);
      auto schema = base.manifest.inputs.find("schema");
      if (schema == base.manifest.inputs.end()) throw std::runtime_error("store does not record its schema input");
      Diagnostics diags;
      auto catalog = docs::parse_schema(text::read_file(schema->second), diags);
      if (auto stats = base.manifest.inputs.find("stats"); stats != base.manifest.inputs.end()) {
        catalog.attach_stats(json::parse(text::read_file(stats->second)), diags);
      }
      const auto pairs = eval::parse_pairs(eval::read_pairs(text::read_file(pairs_path), diags), diags);
      const auto split = eval::split_workload(pairs, *eval::split_mode_from_string(split_name), split_seed);

      auto embedder = serve::make_embedding_provider(config);
      auto generator = serve::make_generative_provider(config);
      auto built = serve::build_store(catalog, eval::log_records(pairs, split.log_ids), config, *embedder,
                                      *generator, base.manifest.inputs);
      diags.append(built.diagnostics);
      if (!eval_store_dir.empty()) built.data.manifest = docs::persist_store(built.data, eval_store_dir);
      const docs::Store store(std::move(built.data));

      const std::set<std::string> test_ids(split.test_ids.begin(), split.test_ids.end());
      std::vector<eval::ParsedPair> test;
      for (const auto& p : pairs) {
        if (test_ids.count(p.pair.id) != 0) test.push_back(p);
      }
      eval::EvalOptions options;
      options.ks = ks;
      options.config = config;
      options.timing = timing;
      options.seed = split_seed;
      auto report = eval::run_eval(store, test, options, *embedder, generator.get());
      report.split = eval::to_json(split);
      text::write_file(report_path, eval::to_json(report).dump(2) + "\n");
      print_diagnostics(diags, verbose);
      std::cout << "split: " << split_name << " log=" << split.log_ids.size() << " test=" << split.test_ids.size()
                << "\n"
                << eval::format_report(report) << "report: " << report_path << "\n";
      return 0;
    }

    if (*gen) {
      const auto corpus = eval::generate_corpus(corpus_config);
      fs::create_directories(corpus_dir);
      const fs::path dir(corpus_dir);
      text::write_file((dir / "schema.sql").string(), corpus.schema_sql);
      text::write_file((dir / "stats.json").string(), corpus.stats.dump(2) + "\n");
      text::write_file((dir / "log.sql").string(), corpus.log_text());
      text::write_file((dir / "pairs.jsonl").string(), eval::write_pairs(corpus.test));
      auto all = corpus.log;
      all.insert(all.end(), corpus.test.begin(), corpus.test.end());
      text::write_file((dir / "all_pairs.jsonl").string(), eval::write_pairs(all));
      std::cout << "wrote " << corpus.entity_names.size() + corpus.link_names.size() << " tables, "
                << corpus.log.size() << " logged queries, " << corpus.test.size() << " test pairs to " << corpus_dir
                << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
