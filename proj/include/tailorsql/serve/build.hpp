#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tailorsql/alloc/allocator.hpp"
#include "tailorsql/diagnostics.hpp"
#include "tailorsql/docs/catalog.hpp"
#include "tailorsql/docs/store.hpp"
#include "tailorsql/embed/provider.hpp"
#include "tailorsql/embed/training.hpp"
#include "tailorsql/serve/config.hpp"
#include "tailorsql/sql/query_log.hpp"

namespace tailorsql::serve {

// Allocation used when there is no workload to optimize against.
inline constexpr alloc::ReparamPoint kDefaultReparamPoint{1.0, 1.0 / 3.0, 0.5};

struct BuildFiles {
  std::string schema;
  std::optional<std::string> stats;
  std::string logs;
};

struct BuildReport {
  docs::StoreData data;
  Diagnostics diagnostics;
  std::size_t parsed_queries = 0;
  std::size_t synthetic_questions = 0;
  std::optional<embed::OptimizeResult> weight_fit;
  std::optional<alloc::BoResult> allocation_search;
};

// Offline pipeline over an in-memory catalog and log: hint mining, raw
// embeddings, proxies, weight fitting, tailored embeddings and the BO
// allocation. Nothing is written to disk. Throws ProviderUnavailable when the
// embedding provider stays unreachable after retries.
BuildReport build_store(const docs::SchemaCatalog& catalog, const std::vector<sql::QueryRecord>& records,
                        const Config& config, embed::EmbeddingProvider& embedder,
                        embed::GenerativeProvider& generator,
                        const std::map<std::string, std::string>& inputs = {});

// Reads the schema, optional stats and log files, then runs build_store.
// Throws std::runtime_error when an input file cannot be read.
BuildReport build_store_from_files(const BuildFiles& files, const Config& config,
                                   embed::EmbeddingProvider& embedder, embed::GenerativeProvider& generator);

// Exact match of canonical SQL; unparseable text never matches.
bool canonical_match(std::string_view generated, std::string_view expected);

}  // namespace tailorsql::serve
