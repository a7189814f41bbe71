#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace tailorsql::embed {

using Vector = std::vector<double>;

inline constexpr std::size_t kProxyCount = 4;

// Order of the proxies everywhere: raw, co-occurrence, SQL, synthetic question.
struct ProxySet {
  std::array<Vector, kProxyCount> v;

  [[nodiscard]] const Vector& raw() const { return v[0]; }
  [[nodiscard]] const Vector& cooccur() const { return v[1]; }
  [[nodiscard]] const Vector& sql() const { return v[2]; }
  [[nodiscard]] const Vector& synthq() const { return v[3]; }
  const Vector& operator[](std::size_t k) const { return v[k]; }

  friend bool operator==(const ProxySet&, const ProxySet&) = default;
};

struct WeightVector {
  std::array<double, kProxyCount> w{0.25, 0.25, 0.25, 0.25};

  double operator[](std::size_t k) const { return w[k]; }
  double& operator[](std::size_t k) { return w[k]; }
  [[nodiscard]] bool on_simplex(double tol = 1e-9) const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

}  // namespace tailorsql::embed
