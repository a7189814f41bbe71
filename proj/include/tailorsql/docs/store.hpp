#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tailorsql/alloc/types.hpp"
#include "tailorsql/docs/document.hpp"
#include "tailorsql/embed/types.hpp"

namespace tailorsql::docs {

inline constexpr int kStoreSchemaVersion = 1;

struct Manifest {
  int schema_version = kStoreSchemaVersion;
  std::size_t dimension = 0;
  std::size_t rows = 0;
  std::string embedding_provider;
  std::map<std::string, std::string> checksums;  // file name -> crc32 (8 hex digits)
  std::vector<std::string> log_query_ids;
  std::map<std::string, std::string> inputs;  // "schema" / "stats" / "logs" -> path
  nlohmann::json settings = nlohmann::json::object();

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

nlohmann::json to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& j);

// Plain contents of a store. Documents hold schema documents first (tables,
// then columns) followed by hints; embedding rows follow document order.
struct StoreData {
  Manifest manifest;
  std::vector<Document> documents;
  std::size_t dimension = 0;
  std::vector<float> raw;       // rows x dimension, row-major
  std::vector<float> tailored;  // rows x dimension, row-major
  embed::WeightVector weights;
  std::optional<alloc::AllocationRecord> allocation;

  friend bool operator==(const StoreData&, const StoreData&) = default;
};

struct AccessCounts {
  std::uint64_t tailored = 0;
  std::uint64_t hints = 0;
  std::uint64_t allocation = 0;
  std::uint64_t weights = 0;
};

// Immutable, shareable store. Reads of tailored embeddings, hint documents,
// weights and the allocation are counted so tests can check which parts a
// pipeline touched.
class Store {
 public:
  Store() = default;
  explicit Store(StoreData data);

  [[nodiscard]] const Manifest& manifest() const noexcept { return data_.manifest; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.documents.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return data_.dimension; }
  [[nodiscard]] std::size_t schema_count() const noexcept { return schema_count_; }
  [[nodiscard]] bool empty() const noexcept { return data_.documents.empty(); }

  [[nodiscard]] const Document& document(std::size_t i) const;
  [[nodiscard]] std::span<const float> raw_embedding(std::size_t i) const;
  [[nodiscard]] std::span<const float> tailored_embedding(std::size_t i) const;
  [[nodiscard]] const embed::WeightVector& weights() const;
  [[nodiscard]] const std::optional<alloc::AllocationRecord>& allocation() const;
  [[nodiscard]] std::optional<std::size_t> index_of(const std::string& id) const;

  // Full access; counts as reading everything.
  [[nodiscard]] const StoreData& data() const;

  [[nodiscard]] AccessCounts access_counts() const;
  void reset_access_counts() const;

 private:
  void note_hint(std::size_t i) const;

  StoreData data_;
  std::size_t schema_count_ = 0;
  std::map<std::string, std::size_t> index_;
  mutable std::atomic<std::uint64_t> tailored_reads_{0};
  mutable std::atomic<std::uint64_t> hint_reads_{0};
  mutable std::atomic<std::uint64_t> allocation_reads_{0};
  mutable std::atomic<std::uint64_t> weight_reads_{0};
};

// Writes manifest.json, tables.jsonl, columns.jsonl, hints.jsonl,
// emb_raw.bin, emb_tailored.bin, weights.json and allocation.json into `dir`.
// An empty store writes the manifest only. Checksums and row counts in the
// manifest are filled in from what is written; the written manifest is
// returned.
Manifest persist_store(const StoreData& data, const std::string& dir);

// Throws VersionMismatch on a schema-version mismatch and CorruptFile on a
// checksum mismatch, a missing or malformed file, or inconsistent row counts.
StoreData load_store(const std::string& dir);

nlohmann::json to_json(const Document& d);
Document document_from_json(const nlohmann::json& j);
nlohmann::json to_json(const alloc::AllocationRecord& a);
alloc::AllocationRecord allocation_from_json(const nlohmann::json& j);

}  // namespace tailorsql::docs
