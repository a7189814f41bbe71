#include "tailorsql/embed/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace tailorsql::embed {

namespace {

template <typename T>
double cosine_impl(std::span<const double> a, std::span<const T> b, Diagnostics* diagnostics) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double y = b[i];
    dot += a[i] * y;
    na += a[i] * a[i];
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) {
    if (diagnostics != nullptr) diagnostics->add("zero_vector", "", "cosine similarity of a zero vector");
    return 0.0;
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace

bool WeightVector::on_simplex(double tol) const {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= -tol)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b, Diagnostics* diagnostics) {
  return cosine_impl(a, b, diagnostics);
}

double cosine_similarity(std::span<const double> a, std::span<const float> b, Diagnostics* diagnostics) {
  return cosine_impl(a, b, diagnostics);
}

double cosine_loss(double cosine, bool relevant) { return relevant ? 1.0 - cosine : std::max(0.0, cosine); }

double cosine_loss(std::span<const double> question, std::span<const double> doc, bool relevant) {
  return cosine_loss(cosine_similarity(question, doc), relevant);
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Vector mean(const std::vector<const Vector*>& vectors) {
  if (vectors.empty()) return {};
  Vector out(vectors.front()->size(), 0.0);
  for (const auto* v : vectors) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (*v)[i];
  }
  const double n = static_cast<double>(vectors.size());
  for (double& x : out) x /= n;
  return out;
}

Vector tailored_embedding(const ProxySet& proxies, const WeightVector& w, Diagnostics* diagnostics) {
  const auto d = proxies.raw().size();
  Vector out(d, 0.0);
  for (std::size_t k = 0; k < kProxyCount; ++k) {
    if (w[k] == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) out[i] += w[k] * proxies[k][i];
  }
  if (norm(out) == 0.0) {
    if (diagnostics != nullptr) diagnostics->add("zero_tailored", "", "tailored embedding is zero; using raw");
    return proxies.raw();
  }
  return out;
}

std::vector<ProxySet> compute_proxies(const std::vector<Vector>& raw,
                                      const std::vector<std::vector<std::size_t>>& relevant_docs,
                                      const std::vector<Vector>& sql_embeddings,
                                      const std::vector<std::optional<Vector>>& question_embeddings) {
  if (sql_embeddings.size() != relevant_docs.size() || question_embeddings.size() != relevant_docs.size()) {
    throw std::invalid_argument("compute_proxies: per-query inputs differ in length");
  }
  std::vector<std::vector<std::size_t>> queries_of(raw.size());
  for (std::size_t q = 0; q < relevant_docs.size(); ++q) {
    for (auto d : relevant_docs[q]) {
      if (d >= raw.size()) throw std::out_of_range("compute_proxies: document index");
      queries_of[d].push_back(q);
    }
  }
  std::vector<ProxySet> out(raw.size());
  for (std::size_t d = 0; d < raw.size(); ++d) {
    std::vector<const Vector*> sqls, questions, neighbours;
    std::set<std::size_t> seen;
    for (auto q : queries_of[d]) {
      sqls.push_back(&sql_embeddings[q]);
      if (question_embeddings[q]) questions.push_back(&*question_embeddings[q]);
      for (auto other : relevant_docs[q]) {
        if (other != d && seen.insert(other).second) neighbours.push_back(&raw[other]);
      }
    }
    auto& p = out[d].v;
    p[0] = raw[d];
    p[1] = neighbours.empty() ? raw[d] : mean(neighbours);
    p[2] = sqls.empty() ? raw[d] : mean(sqls);
    p[3] = questions.empty() ? raw[d] : mean(questions);
  }
  return out;
}

}  // namespace tailorsql::embed
