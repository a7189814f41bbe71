#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "tailorsql/embed/types.hpp"

namespace tailorsql::embed {

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  [[nodiscard]] virtual std::size_t dimension() const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
  // Throws ProviderUnavailable when the backend cannot be reached.
  virtual Vector embed(std::string_view text) = 0;
};

class GenerativeProvider {
 public:
  virtual ~GenerativeProvider() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  // Throws ProviderUnavailable when the backend cannot be reached.
  virtual std::string generate(std::string_view prompt) = 0;
};

// Hashed bag of tokens. Tokens are the lowercased word runs of the text split
// at '_' (punctuation only when there are no words); each adds ±1 to bucket
// fnv1a64(token) mod d, with the sign taken from the hash's top bit. The
// result is L2-normalized.
class MockEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit MockEmbeddingProvider(std::size_t dimension = 256);
  [[nodiscard]] std::size_t dimension() const override { return dimension_; }
  [[nodiscard]] std::string name() const override { return "mock"; }
  Vector embed(std::string_view text) override;

 private:
  std::size_t dimension_;
};

// Deterministic stand-in for an LLM. Recognizes the two prompt shapes this
// library produces:
//  - synthetic-question prompts: answers "Which rows of <tables> satisfy
//    <filters>?" built from the SQL in the prompt;
//  - SQL-generation prompts: answers a fenced SQL block built from the first
//    join hint in the prompt, else from the first table document, else
//    "I cannot answer".
class MockGenerativeProvider final : public GenerativeProvider {
 public:
  [[nodiscard]] std::string name() const override { return "mock"; }
  std::string generate(std::string_view prompt) override;
};

struct HttpEndpoint {
  std::string base_url;  // e.g. "http://localhost:8000"
  std::string model;
  std::string api_key;
  std::chrono::milliseconds timeout{30000};
};

// OpenAI-compatible POST {base}/v1/embeddings.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(HttpEndpoint endpoint, std::size_t dimension);
  [[nodiscard]] std::size_t dimension() const override { return dimension_; }
  [[nodiscard]] std::string name() const override { return "http:" + endpoint_.model; }
  Vector embed(std::string_view text) override;

 private:
  HttpEndpoint endpoint_;
  std::size_t dimension_;
};

// OpenAI-compatible POST {base}/v1/chat/completions.
class HttpGenerativeProvider final : public GenerativeProvider {
 public:
  explicit HttpGenerativeProvider(HttpEndpoint endpoint);
  [[nodiscard]] std::string name() const override { return "http:" + endpoint_.model; }
  std::string generate(std::string_view prompt) override;

 private:
  HttpEndpoint endpoint_;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds backoff{200};  // doubled after each failure
};

// Calls fn until it succeeds or the policy is exhausted, then rethrows the
// last ProviderUnavailable.
template <typename Fn>
auto with_retry(const RetryPolicy& policy, Fn&& fn) -> decltype(fn());

}  // namespace tailorsql::embed

#include "tailorsql/embed/retry.ipp"
