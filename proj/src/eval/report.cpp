#include "tailorsql/eval/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "tailorsql/alloc/allocator.hpp"
#include "tailorsql/docs/document.hpp"
#include "tailorsql/embed/embedding.hpp"
#include "tailorsql/eval/metrics.hpp"
#include "tailorsql/serve/build.hpp"
#include "tailorsql/serve/extract.hpp"
#include "tailorsql/serve/prompt.hpp"
#include "tailorsql/serve/service.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::eval {

using nlohmann::json;
using docs::DocClass;

std::vector<EvalConfig> default_eval_configs() {
  using retrieve::EmbeddingMode;
  return {{"generic", true, EmbeddingMode::Raw, false},
          {"raw/fixed", false, EmbeddingMode::Raw, false},
          {"raw/bo", false, EmbeddingMode::Raw, true},
          {"tailored/fixed", false, EmbeddingMode::Tailored, false},
          {"tailored/bo", false, EmbeddingMode::Tailored, true}};
}

std::string manifest_hash(const docs::Manifest& m) { return text::hex64(text::fnv1a64(docs::to_json(m).dump())); }

namespace {

constexpr DocClass kScoredClasses[] = {DocClass::Table, DocClass::Column, DocClass::JoinHint};

std::string class_key(DocClass c) { return docs::is_hint(c) ? "hint" : std::string(docs::to_string(c)); }

bool same_group(DocClass a, DocClass b) { return docs::is_hint(a) ? docs::is_hint(b) : a == b; }

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

EvalReport run_eval(const docs::Store& store, const std::vector<ParsedPair>& test, const EvalOptions& options,
                    embed::EmbeddingProvider& embedder, embed::GenerativeProvider* generator) {
  EvalReport report;
  report.questions = test.size();
  report.manifest_hash = manifest_hash(store.manifest());
  report.seed = options.seed;
  if (test.empty()) report.warnings.push_back("empty test set; rates are null");
  if (options.exact_match && generator == nullptr) report.warnings.push_back("no generative provider; exact match skipped");

  const auto retry = serve::retry_policy(options.config);
  const auto& docs_all = store.data().documents;
  std::vector<embed::Vector> questions;
  std::vector<std::vector<std::size_t>> relevant;
  for (const auto& p : test) {
    questions.push_back(embed::with_retry(retry, [&] { return embedder.embed(p.pair.question); }));
    std::vector<std::size_t> rel;
    const auto labels = docs::relevance_vector(docs_all, p.subs);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i]) rel.push_back(i);
    }
    relevant.push_back(std::move(rel));
  }

  auto fixed = alloc::reparam_to_tokens(serve::kDefaultReparamPoint, options.config.tokens);
  if (options.config.cap) fixed = alloc::downscale_to_cap(fixed, *options.config.cap);
  const auto bo = store.allocation() ? store.allocation()->allocation : fixed;
  if (!store.allocation()) report.warnings.push_back("store has no allocation; bo configurations use the default");
  const std::int64_t pooled = options.config.cap ? std::min(options.config.tokens, *options.config.cap)
                                                 : options.config.tokens;

  for (const auto& cfg : options.configs) {
    ConfigReport cr;
    cr.name = cfg.name;
    const auto mode = cfg.generic ? retrieve::EmbeddingMode::Raw : cfg.mode;

    // Top-K recall per class from the full ranking.
    for (auto cls : kScoredClasses) {
      auto& per_k = cr.topk_recall[class_key(cls)];
      if (cfg.generic && docs::is_hint(cls)) {
        for (auto k : options.ks) per_k[k] = std::nullopt;
        continue;
      }
      std::vector<std::vector<std::size_t>> ranked(test.size()), rel(test.size());
      for (std::size_t q = 0; q < test.size(); ++q) {
        auto cands = retrieve::score_documents(questions[q], store, mode,
                                               [cls](DocClass c) { return same_group(c, cls); });
        std::sort(cands.begin(), cands.end(), retrieve::ranks_before);
        for (const auto& c : cands) ranked[q].push_back(c.index);
        for (auto r : relevant[q]) {
          if (same_group(store.document(r).cls, cls)) rel[q].push_back(r);
        }
      }
      for (auto k : options.ks) per_k[k] = topk_recall(ranked, rel, k);
    }

    std::vector<double> precision, recall, tokens, millis, matches;
    for (std::size_t q = 0; q < test.size(); ++q) {
      const auto start = std::chrono::steady_clock::now();
      const auto result = cfg.generic ? retrieve::retrieve_generic(questions[q], pooled, store)
                                      : retrieve::retrieve(questions[q], cfg.bo_allocation ? bo : fixed, store, mode);
      millis.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
      std::size_t hits = 0;
      const auto retrieved = result.all();
      for (const auto& d : retrieved) {
        if (std::binary_search(relevant[q].begin(), relevant[q].end(), d.index)) ++hits;
      }
      precision.push_back(retrieved.empty() ? 0.0
                                            : static_cast<double>(hits) / static_cast<double>(retrieved.size()));
      if (!relevant[q].empty()) recall.push_back(static_cast<double>(hits) / static_cast<double>(relevant[q].size()));
      const auto prompt = serve::assemble_prompt(test[q].pair.question, result, store);
      tokens.push_back(static_cast<double>(prompt.token_count));
      if (options.exact_match && generator != nullptr) {
        const auto response = embed::with_retry(retry, [&] { return generator->generate(prompt.text); });
        const auto sql = serve::extract_sql(response);
        matches.push_back(sql.found && serve::canonical_match(sql.sql, test[q].pair.sql) ? 1.0 : 0.0);
      }
    }
    cr.precision = mean_of(precision);
    cr.recall = mean_of(recall);
    cr.mean_prompt_tokens = mean_of(tokens);
    if (options.timing) cr.mean_retrieval_ms = mean_of(millis);
    if (options.exact_match && generator != nullptr) cr.exact_match = mean_of(matches);
    report.configs.push_back(std::move(cr));
  }
  return report;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const EvalSplit& s) {
  return {{"mode", std::string(to_string(s.mode))}, {"seed", s.seed}, {"log_ids", s.log_ids},
          {"test_ids", s.test_ids}};
}

json to_json(const EvalReport& r) {
  json configs = json::array();
  for (const auto& c : r.configs) {
    json recall;
    for (const auto& [cls, per_k] : c.topk_recall) {
      for (const auto& [k, v] : per_k) recall[cls][std::to_string(k)] = opt(v);
    }
    configs.push_back({{"name", c.name},
                       {"topk_recall", recall},
                       {"precision", opt(c.precision)},
                       {"recall", opt(c.recall)},
                       {"mean_prompt_tokens", opt(c.mean_prompt_tokens)},
                       {"mean_retrieval_ms", opt(c.mean_retrieval_ms)},
                       {"exact_match", opt(c.exact_match)}});
  }
  return {{"questions", r.questions},
          {"provenance", {{"manifest_hash", r.manifest_hash}, {"seed", r.seed}}},
          {"configs", configs},
          {"warnings", r.warnings},
          {"split", r.split}};
}

std::string format_report(const EvalReport& r) {
  auto cell = [](const std::optional<double>& v, const char* fmt) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, fmt, *v);
    return std::string(buf);
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "questions: %zu  manifest: %s\n", r.questions, r.manifest_hash.c_str());
  out += line;
  std::vector<std::size_t> ks;
  if (!r.configs.empty() && r.configs.front().topk_recall.count("table") != 0) {
    for (const auto& [k, v] : r.configs.front().topk_recall.at("table")) ks.push_back(k);
  }
  std::snprintf(line, sizeof line, "%-16s", "config");
  out += line;
  for (auto k : ks) {
    std::snprintf(line, sizeof line, " %9s", ("tbl@" + std::to_string(k)).c_str());
    out += line;
  }
  std::snprintf(line, sizeof line, " %9s %9s %9s %9s\n", "precision", "recall", "tokens", "exact");
  out += line;
  for (const auto& c : r.configs) {
    std::snprintf(line, sizeof line, "%-16s", c.name.c_str());
    out += line;
    for (auto k : ks) {
      std::snprintf(line, sizeof line, " %9s", cell(c.topk_recall.at("table").at(k), "%.3f").c_str());
      out += line;
    }
    std::snprintf(line, sizeof line, " %9s %9s %9s %9s\n", cell(c.precision, "%.3f").c_str(),
                  cell(c.recall, "%.3f").c_str(), cell(c.mean_prompt_tokens, "%.1f").c_str(),
                  cell(c.exact_match, "%.3f").c_str());
    out += line;
  }
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace tailorsql::eval
