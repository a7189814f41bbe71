#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "tailorsql/embed/provider.hpp"

namespace tailorsql::serve {

struct ProviderConfig {
  std::string kind = "mock";  // "mock" or "http"
  std::string endpoint;       // base URL for "http"
  std::string model;
  std::string api_key_env;    // name of the environment variable holding the key
  int timeout_ms = 30000;
};

struct Config {
  ProviderConfig embedding;
  ProviderConfig generative;
  std::size_t dimension = 256;
  double epsilon = 0.1;
  std::size_t window = 100;
  std::int64_t tokens = 2000;  // T
  std::optional<std::int64_t> cap;
  int bo_budget = 25;
  std::uint64_t seed = 42;
  std::string objective = "retrieval_f_surrogate";  // or "llm_accuracy"
  double learning_rate = 0.05;
  int max_iterations = 500;
  int retry_attempts = 3;
  int retry_backoff_ms = 200;
};

nlohmann::json to_json(const Config& c);

// Throws ConfigError on unknown keys or ill-typed values.
Config config_from_json(const nlohmann::json& j);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

// Defaults, overlaid with the JSON file (when given), overlaid with
// environment variables TAILOR_<KEY> for top-level keys and
// TAILOR_<SECTION>_<KEY> for provider keys, e.g. TAILOR_EPSILON=0.2 or
// TAILOR_EMBEDDING_KIND=http. Values are read as JSON when they parse,
// otherwise as strings.
Config load_config(const std::optional<std::string>& path, const EnvLookup& env = process_env());

std::unique_ptr<embed::EmbeddingProvider> make_embedding_provider(const Config& c, const EnvLookup& env = process_env());
std::unique_ptr<embed::GenerativeProvider> make_generative_provider(const Config& c,
                                                                    const EnvLookup& env = process_env());
embed::RetryPolicy retry_policy(const Config& c);

}  // namespace tailorsql::serve
