#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tailorsql/docs/store.hpp"
#include "tailorsql/retrieve/retriever.hpp"
#include "tailorsql/retrieve/tokens.hpp"

namespace tailorsql::serve {

// Section headers of a prompt template. The text format is a sequence of
// "[name]" lines, each followed by that section's header text; names are id,
// instructions, tables, columns, hints and question.
struct PromptTemplate {
  std::string id;
  std::string instructions;
  std::string tables;
  std::string columns;
  std::string hints;
  std::string question;
};

// Throws std::invalid_argument when a section is missing.
PromptTemplate parse_prompt_template(std::string_view text);

// The template shipped in assets/, compiled into the library.
const PromptTemplate& default_prompt_template();

struct PromptSection {
  std::string name;
  std::string text;
  std::size_t tokens = 0;
};

struct PromptAssembly {
  std::string template_id;
  std::vector<PromptSection> sections;  // instructions, tables, columns, hints, question; empty ones omitted
  std::string text;                     // sections joined by blank lines
  std::size_t token_count = 0;          // Σ section tokens
};

// Hint lines carry "(observed N times in past queries)".
PromptAssembly assemble_prompt(std::string_view question, const retrieve::RetrievalResult& retrieval,
                               const docs::Store& store, const PromptTemplate& tmpl = default_prompt_template(),
                               const retrieve::TokenCounter& counter = {});

}  // namespace tailorsql::serve
