#include <cctype>
#include <cmath>
#include <stdexcept>

#include "tailorsql/embed/provider.hpp"
#include "tailorsql/embed/synthetic.hpp"
#include "tailorsql/text.hpp"

namespace tailorsql::embed {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

std::vector<std::string> mock_features(std::string_view s) {
  std::vector<std::string> words;
  std::vector<std::string> punct;
  for (const auto tok : text::lexical_tokens(s)) {
    if (!is_word_byte(static_cast<unsigned char>(tok.front()))) {
      punct.emplace_back(tok);
      continue;
    }
    std::size_t start = 0;
    while (start <= tok.size()) {
      std::size_t end = tok.find('_', start);
      if (end == std::string_view::npos) end = tok.size();
      if (end > start) words.push_back(text::to_lower(tok.substr(start, end - start)));
      start = end + 1;
    }
  }
  if (!words.empty()) return words;
  if (!punct.empty()) return punct;
  return {std::string(s)};
}

void add_feature(Vector& v, std::string_view feature) {
  const auto h = text::fnv1a64(feature);
  v[h % v.size()] += (h >> 63) != 0 ? -1.0 : 1.0;
}

// Text between `begin` and the next occurrence of `end` (or end of input).
std::string_view between(std::string_view s, std::string_view begin, std::string_view end) {
  const auto b = s.find(begin);
  if (b == std::string_view::npos) return {};
  const auto from = b + begin.size();
  const auto e = s.find(end, from);
  return s.substr(from, e == std::string_view::npos ? std::string_view::npos : e - from);
}

}  // namespace

MockEmbeddingProvider::MockEmbeddingProvider(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw std::invalid_argument("embedding dimension must be positive");
}

Vector MockEmbeddingProvider::embed(std::string_view s) {
  Vector v(dimension_, 0.0);
  for (const auto& f : mock_features(s)) add_feature(v, f);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm == 0.0) {
    // Features cancelled out; a single feature cannot.
    add_feature(v, s);
    norm = 1.0;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::string MockGenerativeProvider::generate(std::string_view prompt) {
  if (prompt.find(kSyntheticQuestionHeader) != std::string_view::npos) {
    return template_question(text::trim(between(prompt, "\nSQL:\n", "\nQuestion:")));
  }
  const auto join = between(prompt, "Join path over tables ", "\n");
  if (!join.empty()) {
    const auto colon = join.find(": ");
    if (colon != std::string_view::npos) {
      auto conditions = join.substr(colon + 2);
      const auto note = conditions.find(" (observed");
      if (note != std::string_view::npos) conditions = conditions.substr(0, note);
      return "```sql\nSELECT * FROM " + std::string(join.substr(0, colon)) + " WHERE " + std::string(conditions) +
             "\n```";
    }
  }
  std::size_t pos = 0;
  while (pos < prompt.size()) {
    auto nl = prompt.find('\n', pos);
    if (nl == std::string_view::npos) nl = prompt.size();
    const auto line = text::trim(prompt.substr(pos, nl - pos));
    if (text::istarts_with(line, "create table ")) {
      auto rest = text::trim(line.substr(13));
      if (text::istarts_with(rest, "if not exists ")) rest = text::trim(rest.substr(14));
      std::size_t end = 0;
      while (end < rest.size() && rest[end] != '(' && rest[end] != ' ') ++end;
      if (end > 0) return "```sql\nSELECT * FROM " + std::string(rest.substr(0, end)) + "\n```";
    }
    pos = nl + 1;
  }
  return "I cannot answer";
}

}  // namespace tailorsql::embed
