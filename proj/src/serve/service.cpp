#include "tailorsql/serve/service.hpp"

#include <ctime>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "tailorsql/alloc/allocator.hpp"
#include "tailorsql/errors.hpp"
#include "tailorsql/serve/extract.hpp"
#include "tailorsql/serve/prompt.hpp"

namespace tailorsql::serve {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  const auto secs = std::chrono::time_point_cast<std::chrono::seconds>(t);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t - secs).count();
  const std::time_t tt = std::chrono::system_clock::to_time_t(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << ms << 'Z';
  return out.str();
}

json to_json(const AnswerRecord& a) {
  json docs = json::array();
  for (const auto& d : a.retrieval.all()) {
    docs.push_back({{"id", d.id}, {"class", std::string(docs::to_string(d.cls))}, {"score", d.score},
                    {"tokens", d.tokens}});
  }
  json j{{"question_id", a.question_id},
         {"question", a.question},
         {"sql", a.sql},
         {"sql_found", a.sql_found},
         {"pipeline_used", std::string(to_string(a.pipeline))},
         {"forced", a.forced},
         {"documents", docs},
         {"prompt_tokens", a.prompt_tokens},
         {"asked_at", format_timestamp(a.asked_at)}};
  if (a.feedback) {
    j["feedback"] = *a.feedback;
    j["feedback_at"] = format_timestamp(*a.feedback_at);
  }
  return j;
}

alloc::ContextAllocation serving_allocation(const docs::Store& store, const Config& config) {
  if (const auto& rec = store.allocation()) return rec->allocation;
  auto a = alloc::reparam_to_tokens(kDefaultReparamPoint, config.tokens);
  return config.cap ? alloc::downscale_to_cap(a, *config.cap) : a;
}

Service::Service(std::shared_ptr<const docs::Store> store, Config config,
                 std::unique_ptr<embed::EmbeddingProvider> embedder,
                 std::unique_ptr<embed::GenerativeProvider> generator, Clock clock)
    : config_(std::move(config)),
      embedder_(std::move(embedder)),
      generator_(std::move(generator)),
      clock_(std::move(clock)),
      store_(std::move(store)),
      bandit_(config_.epsilon, config_.window, config_.seed) {
  if (!store_) throw std::invalid_argument("service needs a store");
}

AnswerRecord Service::answer(const std::string& question, std::optional<Pipeline> forced) {
  AnswerRecord rec;
  rec.question = question;
  rec.forced = forced.has_value();
  std::shared_ptr<const docs::Store> store;
  {
    std::lock_guard lock(mutex_);
    rec.pipeline = forced ? *forced : bandit_.select();
    rec.question_id = "a" + std::to_string(next_id_++);
    rec.generation = generation_;
    store = store_;
  }
  rec.asked_at = clock_();

  const auto retry = retry_policy(config_);
  {
    std::lock_guard lock(provider_mutex_);
    const auto q = embed::with_retry(retry, [&] { return embedder_->embed(question); });
    if (rec.pipeline == Pipeline::Specialized) {
      rec.retrieval =
          retrieve::retrieve(q, serving_allocation(*store, config_), *store, retrieve::EmbeddingMode::Tailored);
    } else {
      const auto budget = config_.cap ? std::min(config_.tokens, *config_.cap) : config_.tokens;
      rec.retrieval = retrieve::retrieve_generic(q, budget, *store);
    }
    const auto prompt = assemble_prompt(question, rec.retrieval, *store);
    rec.prompt = prompt.text;
    rec.prompt_tokens = prompt.token_count;
    rec.response = embed::with_retry(retry, [&] { return generator_->generate(prompt.text); });
  }
  const auto extracted = extract_sql(rec.response);
  rec.sql = extracted.sql;
  rec.sql_found = extracted.found;

  std::lock_guard lock(mutex_);
  answers_.emplace(rec.question_id, rec);
  return rec;
}

void Service::record_feedback(const std::string& question_id, bool useful) {
  std::lock_guard lock(mutex_);
  auto it = answers_.find(question_id);
  if (it == answers_.end()) throw UnknownQuestion("unknown question id " + question_id);
  if (it->second.feedback) throw DuplicateFeedback("feedback already recorded for " + question_id);
  it->second.feedback = useful;
  it->second.feedback_at = clock_();
  if (it->second.generation == generation_) bandit_.record(it->second.pipeline, useful);
}

docs::Manifest Service::rebuild(std::optional<BuildFiles> files) {
  std::lock_guard rebuild_lock(rebuild_mutex_);
  if (!files) {
    const auto& inputs = store()->manifest().inputs;
    auto schema = inputs.find("schema");
    auto logs = inputs.find("logs");
    if (schema == inputs.end() || logs == inputs.end()) {
      throw std::runtime_error("store does not record its build inputs");
    }
    files = BuildFiles{schema->second, std::nullopt, logs->second};
    if (auto stats = inputs.find("stats"); stats != inputs.end()) files->stats = stats->second;
  }

  BuildReport report;
  {
    std::lock_guard lock(provider_mutex_);
    report = build_store_from_files(*files, config_, *embedder_, *generator_);
  }
  if (store_dir_) {
    // Write next to the live directory, then swap the directories.
    const fs::path live(*store_dir_);
    const fs::path staging = live.string() + ".staging";
    const fs::path retired = live.string() + ".retired";
    fs::remove_all(staging);
    fs::remove_all(retired);
    report.data.manifest = docs::persist_store(report.data, staging.string());
    if (fs::exists(live)) fs::rename(live, retired);
    fs::rename(staging, live);
    fs::remove_all(retired);
  }
  auto next = std::make_shared<const docs::Store>(std::move(report.data));

  std::lock_guard lock(mutex_);
  store_ = next;
  bandit_.reset();
  ++generation_;
  return store_->manifest();
}

json Service::stats() const {
  std::lock_guard lock(mutex_);
  json arms;
  for (auto arm : {Pipeline::Specialized, Pipeline::Generic}) {
    arms[std::string(to_string(arm))] = {{"count", bandit_.count(arm)}, {"avg", bandit_.average(arm)}};
  }
  json allocation = nullptr;
  if (const auto& rec = store_->allocation()) allocation = docs::to_json(*rec);
  const auto& w = store_->weights();
  return {{"epsilon", bandit_.epsilon()},
          {"window", bandit_.window_size()},
          {"arms", arms},
          {"allocation", allocation},
          {"weights", {{"raw", w[0]}, {"cooccur", w[1]}, {"sql", w[2]}, {"synthq", w[3]}}},
          {"answers", answers_.size()},
          {"generation", generation_},
          {"documents", store_->size()}};
}

std::shared_ptr<const docs::Store> Service::store() const {
  std::lock_guard lock(mutex_);
  return store_;
}

std::optional<AnswerRecord> Service::find(const std::string& question_id) const {
  std::lock_guard lock(mutex_);
  auto it = answers_.find(question_id);
  if (it == answers_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Service::generation() const {
  std::lock_guard lock(mutex_);
  return generation_;
}

}  // namespace tailorsql::serve
