#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tailorsql/diagnostics.hpp"

namespace tailorsql::docs {

struct ValueCount {
  std::string value;
  std::uint64_t count = 0;

  friend bool operator==(const ValueCount&, const ValueCount&) = default;
};

struct ColumnInfo {
  std::string name;
  std::string type;
  bool not_null = false;
  bool primary_key = false;
  bool foreign_key = false;
  std::vector<ValueCount> top_values;  // at most kMaxTopValues, descending count

  friend bool operator==(const ColumnInfo&, const ColumnInfo&) = default;
};

struct TableInfo {
  std::string name;
  std::vector<ColumnInfo> columns;
  std::string create_sql;  // original statement text

  [[nodiscard]] const ColumnInfo* find_column(std::string_view name) const;
  friend bool operator==(const TableInfo&, const TableInfo&) = default;
};

inline constexpr std::size_t kMaxTopValues = 10;

class SchemaCatalog {
 public:
  // Throws DuplicateTable when the name is already present.
  void add_table(TableInfo table);

  [[nodiscard]] const std::vector<TableInfo>& tables() const noexcept { return tables_; }
  [[nodiscard]] const TableInfo* find(std::string_view name) const;
  [[nodiscard]] bool contains(std::string_view name) const { return find(name) != nullptr; }
  [[nodiscard]] std::set<std::string> table_names() const;
  [[nodiscard]] bool empty() const noexcept { return tables_.empty(); }

  // Attaches top values from {table: {column: [[value, count], ...]}}. Lists
  // are sorted by descending count (ties by value) and cut to kMaxTopValues.
  // Entries naming unknown tables or columns produce "stats_unknown" diagnostics.
  void attach_stats(const nlohmann::json& stats, Diagnostics& diagnostics);

  friend bool operator==(const SchemaCatalog&, const SchemaCatalog&) = default;

 private:
  std::vector<TableInfo> tables_;
};

// Reads CREATE TABLE statements. Other statements are skipped with a
// "schema_skip" diagnostic. Throws DuplicateTable.
SchemaCatalog parse_schema(std::string_view ddl, Diagnostics& diagnostics);

}  // namespace tailorsql::docs
