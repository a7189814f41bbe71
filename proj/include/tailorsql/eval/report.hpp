#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tailorsql/docs/store.hpp"
#include "tailorsql/embed/provider.hpp"
#include "tailorsql/eval/split.hpp"
#include "tailorsql/retrieve/retriever.hpp"
#include "tailorsql/serve/config.hpp"

namespace tailorsql::eval {

struct EvalConfig {
  std::string name;
  bool generic = false;  // schema documents, raw embeddings, pooled budget
  retrieve::EmbeddingMode mode = retrieve::EmbeddingMode::Raw;
  bool bo_allocation = false;  // store allocation instead of the default point
};

// generic, raw/fixed, raw/bo, tailored/fixed, tailored/bo.
std::vector<EvalConfig> default_eval_configs();

struct EvalOptions {
  std::vector<std::size_t> ks{1, 5};
  std::vector<EvalConfig> configs = default_eval_configs();
  serve::Config config;
  bool timing = false;       // wall-clock retrieval time (makes reports non-reproducible)
  bool exact_match = true;   // needs a generative provider
  std::uint64_t seed = 0;    // recorded for provenance
};

struct ConfigReport {
  std::string name;
  // class name -> K -> recall (null when no question has relevant documents of that class)
  std::map<std::string, std::map<std::size_t, std::optional<double>>> topk_recall;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> mean_prompt_tokens;
  std::optional<double> mean_retrieval_ms;
  std::optional<double> exact_match;
};

struct EvalReport {
  std::size_t questions = 0;
  std::string manifest_hash;
  std::uint64_t seed = 0;
  std::vector<ConfigReport> configs;
  std::vector<std::string> warnings;
  nlohmann::json split = nullptr;
};

std::string manifest_hash(const docs::Manifest& m);

// Scores every test question under each configuration. Test SQL is used only
// for relevance labels and exact-match scoring.
EvalReport run_eval(const docs::Store& store, const std::vector<ParsedPair>& test, const EvalOptions& options,
                    embed::EmbeddingProvider& embedder, embed::GenerativeProvider* generator);

nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const EvalSplit& s);
// Plain-text table, one row per configuration.
std::string format_report(const EvalReport& r);

}  // namespace tailorsql::eval
