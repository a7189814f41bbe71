#include <httplib.h>

#include <cmath>

#include "json.hpp"
#include "tailorsql/embed/provider.hpp"
#include "tailorsql/errors.hpp"

namespace tailorsql::embed {

namespace {

nlohmann::json post_json(const HttpEndpoint& ep, const std::string& path, const nlohmann::json& body) {
  httplib::Client client(ep.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(ep.timeout).count();
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  httplib::Headers headers;
  if (!ep.api_key.empty()) headers.emplace("Authorization", "Bearer " + ep.api_key);
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) throw ProviderUnavailable(ep.base_url + path + ": " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500) {
    throw ProviderUnavailable(ep.base_url + path + ": HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) throw Error(ep.base_url + path + ": HTTP " + std::to_string(res->status));
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw ProviderUnavailable(ep.base_url + path + ": malformed response: " + e.what());
  }
}

}  // namespace

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEndpoint endpoint, std::size_t dimension)
    : endpoint_(std::move(endpoint)), dimension_(dimension) {}

Vector HttpEmbeddingProvider::embed(std::string_view text) {
  const auto res = post_json(endpoint_, "/v1/embeddings", {{"model", endpoint_.model}, {"input", std::string(text)}});
  Vector v;
  try {
    v = res.at("data").at(0).at("embedding").get<Vector>();
  } catch (const nlohmann::json::exception& e) {
    throw ProviderUnavailable(std::string("embedding response without data: ") + e.what());
  }
  if (v.size() != dimension_) {
    throw Error("embedding provider returned dimension " + std::to_string(v.size()) + ", expected " +
                std::to_string(dimension_));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw Error("embedding provider returned a non-finite value");
  }
  return v;
}

HttpGenerativeProvider::HttpGenerativeProvider(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

std::string HttpGenerativeProvider::generate(std::string_view prompt) {
  const nlohmann::json body = {
      {"model", endpoint_.model},
      {"temperature", 0},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", std::string(prompt)}}})},
  };
  const auto res = post_json(endpoint_, "/v1/chat/completions", body);
  try {
    const auto& content = res.at("choices").at(0).at("message").at("content");
    return content.is_string() ? content.get<std::string>() : std::string();
  } catch (const nlohmann::json::exception& e) {
    throw ProviderUnavailable(std::string("completion response without choices: ") + e.what());
  }
}

}  // namespace tailorsql::embed
