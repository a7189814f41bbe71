#include "tailorsql/serve/config.hpp"

#include <cctype>
#include <cstdlib>

#include "tailorsql/errors.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::serve {

using nlohmann::json;

namespace {

json provider_json(const ProviderConfig& p) {
  return {{"kind", p.kind},
          {"endpoint", p.endpoint},
          {"model", p.model},
          {"api_key_env", p.api_key_env},
          {"timeout_ms", p.timeout_ms}};
}

ProviderConfig provider_from_json(const json& j, const std::string& section) {
  ProviderConfig p;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") p.kind = value.get<std::string>();
    else if (key == "endpoint") p.endpoint = value.get<std::string>();
    else if (key == "model") p.model = value.get<std::string>();
    else if (key == "api_key_env") p.api_key_env = value.get<std::string>();
    else if (key == "timeout_ms") p.timeout_ms = value.get<int>();
    else throw ConfigError("unknown config key " + section + "." + key);
  }
  if (p.kind != "mock" && p.kind != "http") throw ConfigError(section + ".kind must be mock or http");
  return p;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

json parse_env_value(const std::string& raw) {
  try {
    return json::parse(raw);
  } catch (const json::exception&) {
    return raw;
  }
}

void overlay(json& base, const json& top) {
  for (const auto& [key, value] : top.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object()) {
      overlay(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

}  // namespace

json to_json(const Config& c) {
  json j;
  j["embedding"] = provider_json(c.embedding);
  j["generative"] = provider_json(c.generative);
  j["dimension"] = c.dimension;
  j["epsilon"] = c.epsilon;
  j["window"] = c.window;
  j["tokens"] = c.tokens;
  j["cap"] = c.cap ? json(*c.cap) : json(nullptr);
  j["bo_budget"] = c.bo_budget;
  j["seed"] = c.seed;
  j["objective"] = c.objective;
  j["learning_rate"] = c.learning_rate;
  j["max_iterations"] = c.max_iterations;
  j["retry_attempts"] = c.retry_attempts;
  j["retry_backoff_ms"] = c.retry_backoff_ms;
  return j;
}

Config config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  Config c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "embedding") c.embedding = provider_from_json(value, key);
      else if (key == "generative") c.generative = provider_from_json(value, key);
      else if (key == "dimension") c.dimension = value.get<std::size_t>();
      else if (key == "epsilon") c.epsilon = value.get<double>();
      else if (key == "window") c.window = value.get<std::size_t>();
      else if (key == "tokens") c.tokens = value.get<std::int64_t>();
      else if (key == "cap") c.cap = value.is_null() ? std::nullopt : std::optional(value.get<std::int64_t>());
      else if (key == "bo_budget") c.bo_budget = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "objective") c.objective = value.get<std::string>();
      else if (key == "learning_rate") c.learning_rate = value.get<double>();
      else if (key == "max_iterations") c.max_iterations = value.get<int>();
      else if (key == "retry_attempts") c.retry_attempts = value.get<int>();
      else if (key == "retry_backoff_ms") c.retry_backoff_ms = value.get<int>();
      else throw ConfigError("unknown config key " + key);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  if (c.window == 0) throw ConfigError("window must be positive");
  if (c.tokens <= 0) throw ConfigError("tokens must be positive");
  if (c.dimension == 0) throw ConfigError("dimension must be positive");
  if (c.bo_budget < 5) throw ConfigError("bo_budget must be at least 5");
  if (c.objective != "retrieval_f_surrogate" && c.objective != "llm_accuracy") {
    throw ConfigError("objective must be retrieval_f_surrogate or llm_accuracy");
  }
  return c;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

Config load_config(const std::optional<std::string>& path, const EnvLookup& env) {
  json merged = to_json(Config{});
  if (path) {
    json file;
    try {
      file = json::parse(text::read_file(*path));
    } catch (const json::exception& e) {
      throw ConfigError("cannot parse " + *path + ": " + e.what());
    }
    if (!file.is_object()) throw ConfigError(*path + ": config root must be an object");
    overlay(merged, file);
  }
  const json defaults = merged;
  for (const auto& [key, value] : defaults.items()) {
    if (value.is_object()) {
      for (const auto& [sub, unused] : value.items()) {
        if (auto v = env("TAILOR_" + upper(key) + "_" + upper(sub))) merged[key][sub] = parse_env_value(*v);
      }
    } else if (auto v = env("TAILOR_" + upper(key))) {
      merged[key] = parse_env_value(*v);
    }
  }
  // String-typed keys must stay strings even when the value looks like JSON.
  for (const char* key : {"objective"}) {
    if (!merged[key].is_string()) merged[key] = merged[key].dump();
  }
  for (const char* section : {"embedding", "generative"}) {
    for (const char* key : {"kind", "endpoint", "model", "api_key_env"}) {
      if (!merged[section][key].is_string()) merged[section][key] = merged[section][key].dump();
    }
  }
  return config_from_json(merged);
}

namespace {

embed::HttpEndpoint endpoint_of(const ProviderConfig& p, const EnvLookup& env) {
  if (p.endpoint.empty()) throw ConfigError("http provider needs an endpoint");
  embed::HttpEndpoint ep;
  ep.base_url = p.endpoint;
  ep.model = p.model;
  if (!p.api_key_env.empty()) ep.api_key = env(p.api_key_env).value_or("");
  ep.timeout = std::chrono::milliseconds(p.timeout_ms);
  return ep;
}

}  // namespace

std::unique_ptr<embed::EmbeddingProvider> make_embedding_provider(const Config& c, const EnvLookup& env) {
  if (c.embedding.kind == "mock") return std::make_unique<embed::MockEmbeddingProvider>(c.dimension);
  return std::make_unique<embed::HttpEmbeddingProvider>(endpoint_of(c.embedding, env), c.dimension);
}

std::unique_ptr<embed::GenerativeProvider> make_generative_provider(const Config& c, const EnvLookup& env) {
  if (c.generative.kind == "mock") return std::make_unique<embed::MockGenerativeProvider>();
  return std::make_unique<embed::HttpGenerativeProvider>(endpoint_of(c.generative, env));
}

embed::RetryPolicy retry_policy(const Config& c) {
  return {std::max(1, c.retry_attempts), std::chrono::milliseconds(c.retry_backoff_ms)};
}

}  // namespace tailorsql::serve
