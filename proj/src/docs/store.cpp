#include "tailorsql/docs/store.hpp"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "tailorsql/errors.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::docs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kTables = "tables.jsonl";
constexpr const char* kColumns = "columns.jsonl";
constexpr const char* kHints = "hints.jsonl";
constexpr const char* kRaw = "emb_raw.bin";
constexpr const char* kTailored = "emb_tailored.bin";
constexpr const char* kWeights = "weights.json";
constexpr const char* kAllocation = "allocation.json";

constexpr const char* kWeightNames[embed::kProxyCount] = {"raw", "cooccur", "sql", "synthq"};

std::string crc_hex(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc & 0xffffffffUL));
  return buf;
}

std::string encode_floats(const std::vector<float>& values) {
  std::string out(values.size() * 4, '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto bits = std::bit_cast<std::uint32_t>(values[i]);
    for (int b = 0; b < 4; ++b) out[i * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
  return out;
}

std::vector<float> decode_floats(std::string_view bytes) {
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i * 4 + b])) << (8 * b);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

std::string jsonl(const std::vector<const Document*>& docs) {
  std::string out;
  for (const auto* d : docs) {
    out += to_json(*d).dump();
    out += '\n';
  }
  return out;
}

std::vector<std::string> string_list(const json& j) {
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(v.get<std::string>());
  return out;
}

}  // namespace

json to_json(const Manifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["dimension"] = m.dimension;
  j["rows"] = m.rows;
  j["embedding_provider"] = m.embedding_provider;
  j["checksums"] = m.checksums;
  j["log_query_ids"] = m.log_query_ids;
  j["inputs"] = m.inputs;
  j["settings"] = m.settings;
  return j;
}

Manifest manifest_from_json(const json& j) {
  Manifest m;
  m.schema_version = j.at("schema_version").get<int>();
  m.dimension = j.at("dimension").get<std::size_t>();
  m.rows = j.at("rows").get<std::size_t>();
  m.embedding_provider = j.value("embedding_provider", "");
  m.checksums = j.at("checksums").get<std::map<std::string, std::string>>();
  m.log_query_ids = j.value("log_query_ids", std::vector<std::string>{});
  m.inputs = j.value("inputs", std::map<std::string, std::string>{});
  m.settings = j.value("settings", json::object());
  return m;
}

json to_json(const Document& d) {
  json j;
  j["id"] = d.id;
  j["class"] = std::string(to_string(d.cls));
  j["content"] = d.content;
  j["token_count"] = d.token_count;
  j["observed_count"] = d.observed_count;
  j["source_query_ids"] = d.source_query_ids;
  j["subject_tables"] = d.subject_tables;
  switch (d.cls) {
    case DocClass::Table:
      j["table"] = d.table;
      break;
    case DocClass::Column:
      j["table"] = d.table;
      j["column"] = d.column;
      break;
    case DocClass::JoinHint:
      j["join_tables"] = d.join_tables;
      j["join_conditions"] = d.join_conditions;
      break;
    case DocClass::FilterHint:
      j["predicate"] = d.predicate;
      break;
    case DocClass::GroupByHint:
      j["group_by"] = d.group_by;
      break;
  }
  return j;
}

Document document_from_json(const json& j) {
  Document d;
  d.id = j.at("id").get<std::string>();
  const auto cls = doc_class_from_string(j.at("class").get<std::string>());
  if (!cls) throw CorruptFile("unknown document class in " + d.id);
  d.cls = *cls;
  d.content = j.at("content").get<std::string>();
  d.token_count = j.at("token_count").get<std::size_t>();
  d.observed_count = j.at("observed_count").get<std::uint64_t>();
  for (const auto& s : string_list(j.at("source_query_ids"))) d.source_query_ids.insert(s);
  for (const auto& s : string_list(j.at("subject_tables"))) d.subject_tables.insert(s);
  d.table = j.value("table", "");
  d.column = j.value("column", "");
  if (j.contains("join_tables")) {
    for (const auto& s : string_list(j["join_tables"])) d.join_tables.insert(s);
  }
  if (j.contains("join_conditions")) {
    for (const auto& s : string_list(j["join_conditions"])) d.join_conditions.insert(s);
  }
  d.predicate = j.value("predicate", "");
  if (j.contains("group_by")) d.group_by = string_list(j["group_by"]);
  return d;
}

json to_json(const alloc::AllocationRecord& a) {
  json j;
  j["T"] = a.allocation.T;
  j["p"] = a.point.p;
  j["p_tbl"] = a.point.p_tbl;
  j["p_col"] = a.point.p_col;
  j["t_tbl"] = a.allocation.t_tbl;
  j["t_col"] = a.allocation.t_col;
  j["t_hint"] = a.allocation.t_hint;
  j["objective_kind"] = a.objective_kind;
  j["score"] = a.score;
  j["seed"] = a.seed;
  j["budget"] = a.budget;
  j["evaluations"] = a.evaluations;
  return j;
}

alloc::AllocationRecord allocation_from_json(const json& j) {
  alloc::AllocationRecord a;
  a.allocation.T = j.at("T").get<std::int64_t>();
  a.point = {j.at("p").get<double>(), j.at("p_tbl").get<double>(), j.at("p_col").get<double>()};
  a.allocation.t_tbl = j.at("t_tbl").get<std::int64_t>();
  a.allocation.t_col = j.at("t_col").get<std::int64_t>();
  a.allocation.t_hint = j.at("t_hint").get<std::int64_t>();
  a.objective_kind = j.at("objective_kind").get<std::string>();
  a.score = j.at("score").get<double>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.budget = j.value("budget", 0);
  a.evaluations = j.value("evaluations", 0);
  return a;
}

Store::Store(StoreData data) : data_(std::move(data)) {
  const auto n = data_.documents.size();
  if ((!data_.raw.empty() && data_.raw.size() != n * data_.dimension) ||
      (!data_.tailored.empty() && data_.tailored.size() != n * data_.dimension)) {
    throw std::invalid_argument("embedding matrix does not match document count");
  }
  while (schema_count_ < n && is_schema(data_.documents[schema_count_].cls)) ++schema_count_;
  for (std::size_t i = schema_count_; i < n; ++i) {
    if (is_schema(data_.documents[i].cls)) throw std::invalid_argument("schema documents must precede hints");
  }
  for (std::size_t i = 0; i < n; ++i) index_.emplace(data_.documents[i].id, i);
}

void Store::note_hint(std::size_t i) const {
  if (i >= schema_count_) hint_reads_.fetch_add(1, std::memory_order_relaxed);
}

const Document& Store::document(std::size_t i) const {
  note_hint(i);
  return data_.documents.at(i);
}

std::span<const float> Store::raw_embedding(std::size_t i) const {
  note_hint(i);
  if (data_.raw.empty()) return {};
  return {data_.raw.data() + i * data_.dimension, data_.dimension};
}

std::span<const float> Store::tailored_embedding(std::size_t i) const {
  note_hint(i);
  tailored_reads_.fetch_add(1, std::memory_order_relaxed);
  if (data_.tailored.empty()) return {};
  return {data_.tailored.data() + i * data_.dimension, data_.dimension};
}

const embed::WeightVector& Store::weights() const {
  weight_reads_.fetch_add(1, std::memory_order_relaxed);
  return data_.weights;
}

const std::optional<alloc::AllocationRecord>& Store::allocation() const {
  allocation_reads_.fetch_add(1, std::memory_order_relaxed);
  return data_.allocation;
}

std::optional<std::size_t> Store::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const StoreData& Store::data() const {
  tailored_reads_.fetch_add(1, std::memory_order_relaxed);
  hint_reads_.fetch_add(1, std::memory_order_relaxed);
  allocation_reads_.fetch_add(1, std::memory_order_relaxed);
  weight_reads_.fetch_add(1, std::memory_order_relaxed);
  return data_;
}

AccessCounts Store::access_counts() const {
  return {tailored_reads_.load(), hint_reads_.load(), allocation_reads_.load(), weight_reads_.load()};
}

void Store::reset_access_counts() const {
  tailored_reads_ = 0;
  hint_reads_ = 0;
  allocation_reads_ = 0;
  weight_reads_ = 0;
}

Manifest persist_store(const StoreData& data, const std::string& dir) {
  fs::create_directories(dir);
  Manifest manifest = data.manifest;
  manifest.schema_version = kStoreSchemaVersion;
  manifest.dimension = data.dimension;
  manifest.rows = data.documents.size();
  manifest.checksums.clear();

  for (const char* name : {kTables, kColumns, kHints, kRaw, kTailored, kWeights, kAllocation}) {
    std::error_code ec;
    fs::remove(fs::path(dir) / name, ec);
  }
  auto emit = [&](const char* name, const std::string& bytes) {
    text::write_file((fs::path(dir) / name).string(), bytes);
    manifest.checksums[name] = crc_hex(bytes);
  };

  if (!data.documents.empty()) {
    std::vector<const Document*> tables, columns, hints;
    for (const auto& d : data.documents) {
      (d.cls == DocClass::Table ? tables : d.cls == DocClass::Column ? columns : hints).push_back(&d);
    }
    emit(kTables, jsonl(tables));
    emit(kColumns, jsonl(columns));
    emit(kHints, jsonl(hints));
    emit(kRaw, encode_floats(data.raw));
    emit(kTailored, encode_floats(data.tailored));
    json w = json::object();
    for (std::size_t k = 0; k < embed::kProxyCount; ++k) w[kWeightNames[k]] = data.weights[k];
    emit(kWeights, w.dump(2) + "\n");
    if (data.allocation) emit(kAllocation, to_json(*data.allocation).dump(2) + "\n");
  }
  text::write_file((fs::path(dir) / kManifest).string(), to_json(manifest).dump(2) + "\n");
  return manifest;
}

StoreData load_store(const std::string& dir) {
  const auto manifest_path = fs::path(dir) / kManifest;
  if (!fs::exists(manifest_path)) throw CorruptFile("missing " + manifest_path.string());
  json mj;
  try {
    mj = json::parse(text::read_file(manifest_path.string()));
  } catch (const json::exception& e) {
    throw CorruptFile(std::string("malformed manifest: ") + e.what());
  }
  const int version = mj.value("schema_version", -1);
  if (version != kStoreSchemaVersion) {
    throw VersionMismatch("store schema version " + std::to_string(version) + ", expected " +
                          std::to_string(kStoreSchemaVersion));
  }
  StoreData data;
  try {
    data.manifest = manifest_from_json(mj);
  } catch (const json::exception& e) {
    throw CorruptFile(std::string("malformed manifest: ") + e.what());
  }
  data.dimension = data.manifest.dimension;

  auto read_checked = [&](const char* name) -> std::optional<std::string> {
    auto it = data.manifest.checksums.find(name);
    if (it == data.manifest.checksums.end()) return std::nullopt;
    const auto path = fs::path(dir) / name;
    if (!fs::exists(path)) throw CorruptFile("missing " + path.string());
    auto bytes = text::read_file(path.string());
    if (crc_hex(bytes) != it->second) throw CorruptFile("checksum mismatch in " + path.string());
    return bytes;
  };

  try {
    for (const char* name : {kTables, kColumns, kHints}) {
      const auto bytes = read_checked(name);
      if (!bytes) continue;
      std::istringstream in(*bytes);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty()) data.documents.push_back(document_from_json(json::parse(line)));
      }
    }
    if (auto bytes = read_checked(kRaw)) data.raw = decode_floats(*bytes);
    if (auto bytes = read_checked(kTailored)) data.tailored = decode_floats(*bytes);
    if (auto bytes = read_checked(kWeights)) {
      const auto w = json::parse(*bytes);
      for (std::size_t k = 0; k < embed::kProxyCount; ++k) data.weights[k] = w.at(kWeightNames[k]).get<double>();
    }
    if (auto bytes = read_checked(kAllocation)) data.allocation = allocation_from_json(json::parse(*bytes));
  } catch (const json::exception& e) {
    throw CorruptFile(std::string("malformed store file: ") + e.what());
  }

  const auto n = data.documents.size();
  if (n != data.manifest.rows) throw CorruptFile("row count does not match manifest");
  if (n > 0 && (data.raw.size() != n * data.dimension || data.tailored.size() != n * data.dimension)) {
    throw CorruptFile("embedding file size does not match manifest");
  }
  return data;
}

}  // namespace tailorsql::docs
