#include "tailorsql/docs/document.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "tailorsql/retrieve/tokens.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::docs {

namespace {

std::set<std::string> restrict_to(const std::set<std::string>& tables, const SchemaCatalog* catalog) {
  if (catalog == nullptr) return tables;
  std::set<std::string> out;
  for (const auto& t : tables) {
    if (catalog->contains(t)) out.insert(t);
  }
  return out;
}

std::string table_list(const std::set<std::string>& tables) {
  return text::join(std::vector<std::string>(tables.begin(), tables.end()), ", ");
}

std::string hint_id(std::string_view prefix, std::string_view key) {
  return std::string(prefix) + ":" + text::hex64(text::fnv1a64(key));
}

void merge_into(std::map<std::string, Document>& docs, Document doc, const sql::QueryRecord& record) {
  auto [it, inserted] = docs.try_emplace(doc.id, std::move(doc));
  if (inserted) {
    it->second.observed_count = record.observed_count;
  } else {
    it->second.observed_count += record.observed_count;
  }
  it->second.source_query_ids.insert(record.id);
}

}  // namespace

std::string_view to_string(DocClass c) {
  switch (c) {
    case DocClass::Table: return "table";
    case DocClass::Column: return "column";
    case DocClass::JoinHint: return "join_hint";
    case DocClass::FilterHint: return "filter_hint";
    case DocClass::GroupByHint: return "group_by_hint";
  }
  return "table";
}

std::optional<DocClass> doc_class_from_string(std::string_view s) {
  for (auto c : kAllClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string table_doc_id(std::string_view table) { return "table:" + std::string(table); }

std::string column_doc_id(std::string_view table, std::string_view column) {
  return "column:" + std::string(table) + "." + std::string(column);
}

std::vector<Document> build_schema_documents(const SchemaCatalog& catalog) {
  if (catalog.empty()) throw std::invalid_argument("schema catalog is empty");
  std::vector<Document> out;
  for (const auto& table : catalog.tables()) {
    Document d;
    d.id = table_doc_id(table.name);
    d.cls = DocClass::Table;
    d.content = table.create_sql;
    d.table = table.name;
    d.subject_tables = {table.name};
    d.token_count = retrieve::count_tokens(d.content);
    out.push_back(std::move(d));
  }
  for (const auto& table : catalog.tables()) {
    for (const auto& col : table.columns) {
      Document d;
      d.id = column_doc_id(table.name, col.name);
      d.cls = DocClass::Column;
      d.content = "Column " + col.name + " of table " + table.name + ".";
      if (!col.top_values.empty()) {
        std::vector<std::string> values;
        for (const auto& v : col.top_values) values.push_back(v.value);
        d.content += " Common values: " + text::join(values, ", ");
      }
      d.table = table.name;
      d.column = col.name;
      d.subject_tables = {table.name};
      d.token_count = retrieve::count_tokens(d.content);
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<Document> build_hint_documents(const std::vector<sql::ParsedQuery>& queries, const SchemaCatalog* catalog) {
  std::map<std::string, Document> merged;
  for (const auto& q : queries) {
    const auto& s = q.subs;
    if (!s.join_conditions.empty()) {
      const std::vector<std::string> conds(s.join_conditions.begin(), s.join_conditions.end());
      const auto key = table_list(s.tables) + " | " + text::join(conds, " and ");
      Document d;
      d.id = hint_id("join", key);
      d.cls = DocClass::JoinHint;
      d.content = "Join path over tables " + table_list(s.tables) + ": " + text::join(conds, " AND ");
      d.join_tables = s.tables;
      d.join_conditions = s.join_conditions;
      d.subject_tables = restrict_to(s.tables, catalog);
      merge_into(merged, std::move(d), q.record);
    }
    for (const auto& f : s.filters) {
      Document d;
      d.id = hint_id("filter", f.text);
      d.cls = DocClass::FilterHint;
      d.content = "Filter on " + (f.tables.empty() ? std::string("unknown tables") : "tables " + table_list(f.tables)) +
                  ": " + f.text;
      d.predicate = f.text;
      d.subject_tables = restrict_to(f.tables, catalog);
      merge_into(merged, std::move(d), q.record);
    }
    if (!s.group_by.empty()) {
      const auto key = text::join(s.group_by, ", ");
      Document d;
      d.id = hint_id("groupby", key);
      d.cls = DocClass::GroupByHint;
      d.content = "Group by on " +
                  (s.group_by_tables.empty() ? std::string("unknown tables")
                                             : "tables " + table_list(s.group_by_tables)) +
                  ": " + key;
      d.group_by = s.group_by;
      d.subject_tables = restrict_to(s.group_by_tables, catalog);
      merge_into(merged, std::move(d), q.record);
    }
  }
  std::vector<Document> out;
  out.reserve(merged.size());
  for (auto& [id, d] : merged) {
    d.token_count = retrieve::count_tokens(d.content);
    out.push_back(std::move(d));
  }
  std::stable_sort(out.begin(), out.end(), [](const Document& a, const Document& b) {
    return std::tie(a.cls, a.id) < std::tie(b.cls, b.id);
  });
  return out;
}

bool label_relevance(const Document& doc, const sql::QuerySubcomponents& query) {
  switch (doc.cls) {
    case DocClass::Table:
      return query.tables.count(doc.table) != 0;
    case DocClass::Column:
      return query.columns.count(doc.table + "." + doc.column) != 0 ||
             (query.unresolved_columns.count(doc.column) != 0 && query.tables.count(doc.table) != 0);
    case DocClass::JoinHint:
      return !doc.join_conditions.empty() &&
             std::includes(query.join_conditions.begin(), query.join_conditions.end(), doc.join_conditions.begin(),
                           doc.join_conditions.end());
    case DocClass::FilterHint:
      return query.has_filter(doc.predicate);
    case DocClass::GroupByHint:
      return !doc.group_by.empty() && doc.group_by == query.group_by;
  }
  return false;
}

std::vector<bool> relevance_vector(const std::vector<Document>& docs, const sql::QuerySubcomponents& query) {
  std::vector<bool> out(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) out[i] = label_relevance(docs[i], query);
  return out;
}

}  // namespace tailorsql::docs
