#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tailorsql/docs/store.hpp"

namespace test_support {

struct DocSpec {
  tailorsql::docs::DocClass cls;
  std::size_t tokens;
  std::vector<double> raw;
  std::vector<double> tailored;  // empty: same as raw
  std::uint64_t observed = 1;
};

// Store with hand-picked classes, token counts and embeddings. Ids are
// "<class>:<position>" so lexical order follows insertion for < 10 documents
// per class.
inline tailorsql::docs::StoreData make_store(const std::vector<DocSpec>& specs) {
  using namespace tailorsql;
  docs::StoreData data;
  data.dimension = specs.empty() ? 0 : specs.front().raw.size();
  // Schema classes first, as the store requires.
  std::vector<const DocSpec*> ordered;
  for (auto cls : docs::kAllClasses) {
    for (const auto& s : specs) {
      if (s.cls == cls) ordered.push_back(&s);
    }
  }
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& s = *ordered[i];
    docs::Document d;
    d.cls = s.cls;
    d.id = std::string(docs::to_string(s.cls)) + ":" + (i < 10 ? "0" : "") + std::to_string(i);
    d.content = d.id;
    d.token_count = s.tokens;
    d.observed_count = s.observed;
    d.table = "t" + std::to_string(i);
    if (docs::is_hint(s.cls)) d.source_query_ids = {"q1"};
    data.documents.push_back(d);
    for (double x : s.raw) data.raw.push_back(static_cast<float>(x));
    for (double x : (s.tailored.empty() ? s.raw : s.tailored)) data.tailored.push_back(static_cast<float>(x));
  }
  return data;
}

// Unit 2-vector whose cosine with (1, 0) is c.
inline std::vector<double> at_cosine(double c) { return {c, std::sqrt(std::max(0.0, 1.0 - c * c))}; }

}  // namespace test_support
