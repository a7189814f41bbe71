#include "tailorsql/docs/catalog.hpp"

#include <algorithm>

#include "tailorsql/errors.hpp"
#include "tailorsql/sql/lexer.hpp"
#include "tailorsql/sql/query_log.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::docs {

namespace {

using sql::Token;
using sql::TokenKind;

bool is_word(const Token& t) { return t.kind == TokenKind::Identifier || t.kind == TokenKind::QuotedIdentifier; }

std::string name_of(const Token& t) { return t.kind == TokenKind::QuotedIdentifier ? t.text : text::to_lower(t.text); }

bool is_modifier(const Token& t) {
  static const char* const kModifiers[] = {"not",     "null",    "primary",       "references", "default",
                                           "unique",  "check",   "constraint",    "collate",    "auto_increment",
                                           "autoincrement", "generated", "identity", "comment", "key"};
  if (t.kind != TokenKind::Identifier) return false;
  for (const char* m : kModifiers) {
    if (sql::is_keyword(t, m)) return true;
  }
  return false;
}

// Column names listed in "( a, b )" starting at tokens[i] == '('.
std::vector<std::string> paren_names(const std::vector<Token>& tokens, std::size_t i) {
  std::vector<std::string> out;
  if (i >= tokens.size() || tokens[i].kind != TokenKind::LParen) return out;
  for (++i; i < tokens.size() && tokens[i].kind != TokenKind::RParen; ++i) {
    if (is_word(tokens[i])) out.push_back(name_of(tokens[i]));
  }
  return out;
}

void parse_element(const std::vector<Token>& el, TableInfo& table) {
  if (el.empty()) return;
  std::size_t i = 0;
  if (sql::is_keyword(el[0], "constraint")) i = 2;
  if (i >= el.size()) return;
  if (sql::is_keyword(el[i], "primary") || sql::is_keyword(el[i], "foreign")) {
    const bool primary = sql::is_keyword(el[i], "primary");
    std::size_t j = i + 1;
    while (j < el.size() && el[j].kind != TokenKind::LParen) ++j;
    for (const auto& name : paren_names(el, j)) {
      for (auto& col : table.columns) {
        if (col.name != name) continue;
        if (primary) {
          col.primary_key = true;
          col.not_null = true;
        } else {
          col.foreign_key = true;
        }
      }
    }
    return;
  }
  if (sql::is_keyword(el[i], "unique") || sql::is_keyword(el[i], "check") || sql::is_keyword(el[i], "index") ||
      sql::is_keyword(el[i], "key") || sql::is_keyword(el[i], "fulltext")) {
    return;
  }
  if (!is_word(el[i])) return;

  ColumnInfo col;
  col.name = name_of(el[i++]);
  std::string type;
  while (i < el.size() && !is_modifier(el[i])) {
    const auto& t = el[i];
    if (t.kind == TokenKind::LParen || t.kind == TokenKind::RParen || t.kind == TokenKind::Comma) {
      type += t.text;
    } else {
      if (!type.empty() && type.back() != '(' && type.back() != ',') type += ' ';
      type += text::to_lower(t.text);
    }
    ++i;
  }
  col.type = type;
  for (; i < el.size(); ++i) {
    if (sql::is_keyword(el[i], "not") && i + 1 < el.size() && sql::is_keyword(el[i + 1], "null")) col.not_null = true;
    if (sql::is_keyword(el[i], "primary")) {
      col.primary_key = true;
      col.not_null = true;
    }
    if (sql::is_keyword(el[i], "references")) col.foreign_key = true;
  }
  table.columns.push_back(std::move(col));
}

std::string render_value(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

const ColumnInfo* TableInfo::find_column(std::string_view col) const {
  for (const auto& c : columns) {
    if (c.name == col) return &c;
  }
  return nullptr;
}

void SchemaCatalog::add_table(TableInfo table) {
  if (contains(table.name)) throw DuplicateTable("duplicate table: " + table.name);
  tables_.push_back(std::move(table));
}

const TableInfo* SchemaCatalog::find(std::string_view name) const {
  for (const auto& t : tables_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::set<std::string> SchemaCatalog::table_names() const {
  std::set<std::string> out;
  for (const auto& t : tables_) out.insert(t.name);
  return out;
}

void SchemaCatalog::attach_stats(const nlohmann::json& stats, Diagnostics& diagnostics) {
  if (!stats.is_object()) {
    diagnostics.add("stats_invalid", "", "stats root is not an object");
    return;
  }
  for (const auto& [table_key, columns] : stats.items()) {
    const auto table_name = text::to_lower(table_key);
    auto it = std::find_if(tables_.begin(), tables_.end(), [&](const TableInfo& t) { return t.name == table_name; });
    if (it == tables_.end() || !columns.is_object()) {
      diagnostics.add("stats_unknown", table_name, "stats for unknown table");
      continue;
    }
    for (const auto& [column_key, values] : columns.items()) {
      const auto column_name = text::to_lower(column_key);
      auto col = std::find_if(it->columns.begin(), it->columns.end(),
                              [&](const ColumnInfo& c) { return c.name == column_name; });
      if (col == it->columns.end() || !values.is_array()) {
        diagnostics.add("stats_unknown", table_name + "." + column_name, "stats for unknown column");
        continue;
      }
      std::vector<ValueCount> top;
      for (const auto& entry : values) {
        if (!entry.is_array() || entry.size() != 2 || !entry[1].is_number()) {
          diagnostics.add("stats_invalid", table_name + "." + column_name, "entry is not [value, count]");
          continue;
        }
        const double count = entry[1].get<double>();
        top.push_back({render_value(entry[0]), count > 0 ? static_cast<std::uint64_t>(count) : 0});
      }
      std::stable_sort(top.begin(), top.end(), [](const ValueCount& a, const ValueCount& b) {
        return a.count != b.count ? a.count > b.count : a.value < b.value;
      });
      if (top.size() > kMaxTopValues) top.resize(kMaxTopValues);
      col->top_values = std::move(top);
    }
  }
}

SchemaCatalog parse_schema(std::string_view ddl, Diagnostics& diagnostics) {
  SchemaCatalog catalog;
  for (auto piece : sql::split_sql_statements(ddl)) {
    const auto stmt = text::trim(piece);
    if (stmt.empty()) continue;
    std::vector<Token> tokens;
    try {
      tokens = sql::tokenize(stmt);
    } catch (const LexError& e) {
      diagnostics.add("schema_skip", std::string(stmt.substr(0, 40)), e.what());
      continue;
    }
    if (tokens.size() <= 1) continue;  // comments only
    std::size_t i = 0;
    auto kw = [&](std::string_view k) {
      if (i < tokens.size() && sql::is_keyword(tokens[i], k)) {
        ++i;
        return true;
      }
      return false;
    };
    if (!kw("create")) {
      diagnostics.add("schema_skip", std::string(stmt.substr(0, 40)), "not a CREATE TABLE statement");
      continue;
    }
    kw("temporary") || kw("temp");
    if (!kw("table")) {
      diagnostics.add("schema_skip", std::string(stmt.substr(0, 40)), "not a CREATE TABLE statement");
      continue;
    }
    if (kw("if")) {
      kw("not");
      kw("exists");
    }
    std::string name;
    while (i < tokens.size() && is_word(tokens[i])) {
      name = name_of(tokens[i++]);  // keep the last part of schema.table
      if (i < tokens.size() && tokens[i].kind == TokenKind::Dot) {
        ++i;
      } else {
        break;
      }
    }
    if (name.empty() || i >= tokens.size() || tokens[i].kind != TokenKind::LParen) {
      diagnostics.add("schema_skip", std::string(stmt.substr(0, 40)), "malformed CREATE TABLE");
      continue;
    }
    TableInfo table;
    table.name = name;
    table.create_sql = std::string(stmt);
    ++i;
    int depth = 0;
    std::vector<Token> element;
    for (; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      if (t.kind == TokenKind::LParen) ++depth;
      if (t.kind == TokenKind::RParen) {
        if (depth == 0) break;
        --depth;
      }
      if (t.kind == TokenKind::Comma && depth == 0) {
        parse_element(element, table);
        element.clear();
      } else {
        element.push_back(t);
      }
    }
    parse_element(element, table);
    catalog.add_table(std::move(table));
  }
  return catalog;
}

}  // namespace tailorsql::docs
