#include "tailorsql/serve/prompt.hpp"

#include <map>
#include <stdexcept>

#include "prompt_template_asset.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::serve {

PromptTemplate parse_prompt_template(std::string_view body) {
  std::map<std::string, std::string> sections;
  std::string current;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto nl = body.find('\n', pos);
    if (nl == std::string_view::npos) nl = body.size();
    const auto line = body.substr(pos, nl - pos);
    const auto trimmed = text::trim(line);
    if (trimmed.size() > 2 && trimmed.front() == '[' && trimmed.back() == ']') {
      current = std::string(trimmed.substr(1, trimmed.size() - 2));
      sections[current];
    } else if (!current.empty()) {
      auto& s = sections[current];
      if (!s.empty()) s += '\n';
      s += line;
    }
    pos = nl + 1;
  }
  PromptTemplate t;
  auto take = [&](const char* name, std::string& out) {
    auto it = sections.find(name);
    if (it == sections.end()) throw std::invalid_argument(std::string("prompt template lacks [") + name + "]");
    out = std::string(text::trim(it->second));
  };
  take("id", t.id);
  take("instructions", t.instructions);
  take("tables", t.tables);
  take("columns", t.columns);
  take("hints", t.hints);
  take("question", t.question);
  return t;
}

const PromptTemplate& default_prompt_template() {
  static const PromptTemplate t = parse_prompt_template(kPromptTemplateAsset);
  return t;
}

PromptAssembly assemble_prompt(std::string_view question, const retrieve::RetrievalResult& retrieval,
                               const docs::Store& store, const PromptTemplate& tmpl,
                               const retrieve::TokenCounter& counter) {
  PromptAssembly out;
  out.template_id = tmpl.id;
  auto add = [&](std::string name, std::string body) {
    const auto tokens = counter(body);
    out.sections.push_back({std::move(name), std::move(body), tokens});
  };
  add("instructions", tmpl.instructions);
  if (!retrieval.tables.empty()) {
    std::string body = tmpl.tables;
    for (const auto& r : retrieval.tables) body += "\n" + store.document(r.index).content;
    add("tables", std::move(body));
  }
  if (!retrieval.columns.empty()) {
    std::string body = tmpl.columns;
    for (const auto& r : retrieval.columns) body += "\n- " + store.document(r.index).content;
    add("columns", std::move(body));
  }
  if (!retrieval.hints.empty()) {
    std::string body = tmpl.hints;
    for (const auto& r : retrieval.hints) {
      const auto& d = store.document(r.index);
      body += "\n- " + d.content + " (observed " + std::to_string(d.observed_count) +
              (d.observed_count == 1 ? " time" : " times") + " in past queries)";
    }
    add("hints", std::move(body));
  }
  add("question", tmpl.question + "\n" + std::string(text::trim(question)));

  std::vector<std::string> parts;
  for (const auto& s : out.sections) {
    parts.push_back(s.text);
    out.token_count += s.tokens;
  }
  out.text = text::join(parts, "\n\n") + "\n";
  return out;
}

}  // namespace tailorsql::serve
