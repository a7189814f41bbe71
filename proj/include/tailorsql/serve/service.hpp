#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "tailorsql/docs/store.hpp"
#include "tailorsql/embed/provider.hpp"
#include "tailorsql/retrieve/retriever.hpp"
#include "tailorsql/serve/bandit.hpp"
#include "tailorsql/serve/build.hpp"
#include "tailorsql/serve/config.hpp"

namespace tailorsql::serve {

using Clock = std::function<std::chrono::system_clock::time_point()>;

struct AnswerRecord {
  std::string question_id;
  std::string question;
  Pipeline pipeline = Pipeline::Specialized;
  bool forced = false;
  retrieve::RetrievalResult retrieval;
  std::string prompt;
  std::size_t prompt_tokens = 0;
  std::string response;
  std::string sql;
  bool sql_found = false;
  std::chrono::system_clock::time_point asked_at;
  std::optional<bool> feedback;
  std::optional<std::chrono::system_clock::time_point> feedback_at;
  std::uint64_t generation = 0;  // store generation that produced the answer
};

nlohmann::json to_json(const AnswerRecord& a);
std::string format_timestamp(std::chrono::system_clock::time_point t);

// Serves questions over a shared immutable store. The store pointer and the
// bandit state change together under one mutex, so a request sees either the
// old store with its rewards or the new store with empty windows.
class Service {
 public:
  Service(std::shared_ptr<const docs::Store> store, Config config,
          std::unique_ptr<embed::EmbeddingProvider> embedder, std::unique_ptr<embed::GenerativeProvider> generator,
          Clock clock = std::chrono::system_clock::now);

  // Routes the question (or uses `forced`), retrieves, prompts and extracts
  // SQL. Throws ProviderUnavailable when a provider fails after retries.
  AnswerRecord answer(const std::string& question, std::optional<Pipeline> forced = std::nullopt);

  // Throws UnknownQuestion and DuplicateFeedback. Feedback for an answer
  // produced before the latest rebuild is stored on the record but not fed to
  // the bandit.
  void record_feedback(const std::string& question_id, bool useful);

  // Runs the offline build from `files` (the store's recorded inputs when
  // omitted), persists it to `store_dir` when set, then swaps the store and
  // clears both reward windows. On any failure the old store and rewards stay.
  docs::Manifest rebuild(std::optional<BuildFiles> files = std::nullopt);

  [[nodiscard]] nlohmann::json stats() const;
  [[nodiscard]] std::shared_ptr<const docs::Store> store() const;
  [[nodiscard]] std::optional<AnswerRecord> find(const std::string& question_id) const;
  [[nodiscard]] const Config& config() const noexcept { return config_; }
  [[nodiscard]] std::uint64_t generation() const;

  void set_store_dir(std::string dir) { store_dir_ = std::move(dir); }

 private:
  Config config_;
  std::unique_ptr<embed::EmbeddingProvider> embedder_;
  std::unique_ptr<embed::GenerativeProvider> generator_;
  Clock clock_;
  std::optional<std::string> store_dir_;

  mutable std::mutex mutex_;  // guards everything below
  std::shared_ptr<const docs::Store> store_;
  BanditState bandit_;
  std::uint64_t generation_ = 0;
  std::uint64_t next_id_ = 1;
  std::map<std::string, AnswerRecord> answers_;

  std::mutex rebuild_mutex_;  // one rebuild at a time
  std::mutex provider_mutex_;  // providers are not assumed thread-safe
};

// Allocation of the store, or the default point when it has none.
alloc::ContextAllocation serving_allocation(const docs::Store& store, const Config& config);

}  // namespace tailorsql::serve
