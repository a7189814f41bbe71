#include "tailorsql/serve/build.hpp"

#include <algorithm>

#include "tailorsql/alloc/surrogate.hpp"
#include "tailorsql/docs/document.hpp"
#include "tailorsql/embed/embedding.hpp"
#include "tailorsql/embed/synthetic.hpp"
#include "tailorsql/errors.hpp"
#include "tailorsql/retrieve/retriever.hpp"
#include "tailorsql/serve/extract.hpp"
#include "tailorsql/serve/prompt.hpp"
#include "tailorsql/sql/parser.hpp"
#include "tailorsql/sql/subcomponents.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::serve {

using nlohmann::json;

namespace {

class EmbeddingCache {
 public:
  EmbeddingCache(embed::EmbeddingProvider& provider, embed::RetryPolicy retry)
      : provider_(provider), retry_(retry) {}

  const embed::Vector& operator()(const std::string& text) {
    auto it = cache_.find(text);
    if (it != cache_.end()) return it->second;
    auto v = embed::with_retry(retry_, [&] { return provider_.embed(text); });
    if (v.size() != provider_.dimension()) {
      throw ProviderUnavailable("embedding provider returned " + std::to_string(v.size()) + " values, expected " +
                                std::to_string(provider_.dimension()));
    }
    return cache_.emplace(text, std::move(v)).first->second;
  }

 private:
  embed::EmbeddingProvider& provider_;
  embed::RetryPolicy retry_;
  std::map<std::string, embed::Vector> cache_;
};

void append_rows(std::vector<float>& out, const embed::Vector& v) {
  for (double x : v) out.push_back(static_cast<float>(x));
}

json build_settings(const Config& config) {
  auto cfg = to_json(config);
  json s;
  s["config"] = cfg;
  s["optimizer"] = {{"method", "projected_gradient_descent"},
                    {"initial", {0.25, 0.25, 0.25, 0.25}},
                    {"learning_rate", config.learning_rate},
                    {"max_iterations", config.max_iterations},
                    {"tolerance", embed::OptimizeConfig{}.tolerance},
                    {"window", embed::OptimizeConfig{}.window}};
  const alloc::BoConfig bo;
  s["allocator"] = {{"method", "bayesian_optimization"},
                    {"initial_design", "latin_hypercube"},
                    {"kernel", "matern52"},
                    {"acquisition", "expected_improvement"},
                    {"xi", bo.xi},
                    {"random_candidates", bo.random_candidates},
                    {"refine_starts", bo.refine_starts},
                    {"budget", config.bo_budget},
                    {"seed", config.seed},
                    {"p_min", alloc::kPMin}};
  return s;
}

}  // namespace

bool canonical_match(std::string_view generated, std::string_view expected) {
  try {
    return sql::canonical_sql(sql::parse_sql(generated)) == sql::canonical_sql(sql::parse_sql(expected));
  } catch (const LexError&) {
    return false;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

BuildReport build_store(const docs::SchemaCatalog& catalog, const std::vector<sql::QueryRecord>& records,
                        const Config& config, embed::EmbeddingProvider& embedder,
                        embed::GenerativeProvider& generator, const std::map<std::string, std::string>& inputs) {
  if (embedder.dimension() != config.dimension) {
    throw ConfigError("embedding provider dimension " + std::to_string(embedder.dimension()) +
                      " does not match configured dimension " + std::to_string(config.dimension));
  }
  BuildReport report;
  auto& diags = report.diagnostics;
  const auto retry = retry_policy(config);

  const auto parsed = sql::parse_workload(records, diags);
  report.parsed_queries = parsed.size();

  std::vector<docs::Document> documents = docs::build_schema_documents(catalog);
  for (auto& h : docs::build_hint_documents(parsed, &catalog)) documents.push_back(std::move(h));

  EmbeddingCache embed_text(embedder, retry);
  std::vector<embed::Vector> raw;
  raw.reserve(documents.size());
  for (const auto& d : documents) raw.push_back(embed_text(d.content));

  // Per logged query: relevant documents, SQL embedding, synthetic question.
  std::vector<std::vector<std::size_t>> relevant(parsed.size());
  std::vector<embed::Vector> sql_embeddings;
  std::vector<std::optional<embed::Vector>> question_embeddings;
  for (std::size_t q = 0; q < parsed.size(); ++q) {
    const auto labels = docs::relevance_vector(documents, parsed[q].subs);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i]) relevant[q].push_back(i);
    }
    sql_embeddings.push_back(embed_text(parsed[q].record.text));
    auto question = embed::generate_synthetic_question(parsed[q], catalog, generator, diags, retry);
    if (question) {
      question_embeddings.emplace_back(embed_text(question->text));
      ++report.synthetic_questions;
    } else {
      question_embeddings.emplace_back(std::nullopt);
    }
  }

  const auto proxies = embed::compute_proxies(raw, relevant, sql_embeddings, question_embeddings);

  embed::TrainingSet training;
  training.proxies = proxies;
  std::vector<alloc::WorkloadQuestion> workload;
  std::vector<std::size_t> workload_query;
  for (std::size_t q = 0; q < parsed.size(); ++q) {
    if (!question_embeddings[q]) continue;
    training.questions.push_back(*question_embeddings[q]);
    training.relevant.push_back(relevant[q]);
    workload.push_back({*question_embeddings[q], relevant[q]});
    workload_query.push_back(q);
  }

  embed::WeightVector weights;
  if (!training.empty()) {
    embed::OptimizeConfig oc;
    oc.learning_rate = config.learning_rate;
    oc.max_iterations = config.max_iterations;
    report.weight_fit = embed::optimize_weights(training, oc, &diags);
    weights = report.weight_fit->weights;
  }

  docs::StoreData data;
  data.documents = std::move(documents);
  data.dimension = config.dimension;
  data.weights = weights;
  for (std::size_t i = 0; i < data.documents.size(); ++i) {
    append_rows(data.raw, raw[i]);
    append_rows(data.tailored, embed::tailored_embedding(proxies[i], weights, &diags));
  }
  data.manifest.embedding_provider = embedder.name();
  for (const auto& r : parsed) data.manifest.log_query_ids.push_back(r.record.id);
  data.manifest.inputs = inputs;
  data.manifest.settings = build_settings(config);
  if (report.weight_fit) {
    data.manifest.settings["weight_fit"] = {{"initial_objective", report.weight_fit->initial_objective},
                                            {"final_objective", report.weight_fit->final_objective},
                                            {"iterations", report.weight_fit->iterations}};
  }

  alloc::AllocationRecord record;
  record.seed = config.seed;
  record.budget = config.bo_budget;
  if (workload.empty()) {
    record.point = kDefaultReparamPoint;
    record.allocation = alloc::reparam_to_tokens(record.point, config.tokens);
    if (config.cap) record.allocation = alloc::downscale_to_cap(record.allocation, *config.cap);
    record.objective_kind = "fixed";
    diags.add("no_workload", "", "no synthetic questions; using the default allocation");
  } else {
    const docs::Store store(data);
    alloc::AllocationObjective objective;
    std::optional<alloc::SurrogateObjective> surrogate;
    if (config.objective == "llm_accuracy") {
      objective = [&](const alloc::ContextAllocation& a) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < workload.size(); ++i) {
          const auto& query = parsed[workload_query[i]];
          const auto result = retrieve::retrieve(workload[i].embedding, a, store, retrieve::EmbeddingMode::Tailored);
          const auto question = embed::template_question(query.record.text);
          const auto prompt = assemble_prompt(question, result, store);
          const auto response = embed::with_retry(retry, [&] { return generator.generate(prompt.text); });
          const auto extracted = extract_sql(response);
          if (extracted.found && canonical_match(extracted.sql, query.record.text)) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(workload.size());
      };
    } else {
      surrogate.emplace(store, workload, retrieve::EmbeddingMode::Tailored);
      objective = [&](const alloc::ContextAllocation& a) { return (*surrogate)(a); };
    }
    alloc::BoConfig bo;
    bo.budget = config.bo_budget;
    bo.seed = config.seed;
    bo.cap = config.cap;
    auto result = alloc::bayes_optimize(objective, config.tokens, bo, &diags);
    record.point = result.best_point;
    record.allocation = result.best_allocation;
    record.score = result.best_score;
    record.objective_kind = config.objective;
    record.evaluations = static_cast<int>(result.trace.size());
    report.allocation_search = std::move(result);
  }
  data.allocation = record;
  report.data = std::move(data);
  return report;
}

BuildReport build_store_from_files(const BuildFiles& files, const Config& config,
                                   embed::EmbeddingProvider& embedder, embed::GenerativeProvider& generator) {
  Diagnostics diags;
  auto catalog = docs::parse_schema(text::read_file(files.schema), diags);
  if (catalog.empty()) throw std::runtime_error(files.schema + ": no CREATE TABLE statements");
  std::map<std::string, std::string> inputs{{"schema", files.schema}, {"logs", files.logs}};
  if (files.stats) {
    json stats;
    try {
      stats = json::parse(text::read_file(*files.stats));
    } catch (const json::exception& e) {
      throw std::runtime_error(*files.stats + ": " + e.what());
    }
    catalog.attach_stats(stats, diags);
    inputs["stats"] = *files.stats;
  }
  const auto records = sql::parse_query_log(text::read_file(files.logs));
  auto report = build_store(catalog, records, config, embedder, generator, inputs);
  diags.append(report.diagnostics);
  report.diagnostics = std::move(diags);
  return report;
}

}  // namespace tailorsql::serve
