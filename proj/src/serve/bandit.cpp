#include "tailorsql/serve/bandit.hpp"

#include <stdexcept>

namespace tailorsql::serve {

std::string_view to_string(Pipeline p) { return p == Pipeline::Specialized ? "specialized" : "generic"; }

std::optional<Pipeline> pipeline_from_string(std::string_view s) {
  if (s == "specialized") return Pipeline::Specialized;
  if (s == "generic") return Pipeline::Generic;
  return std::nullopt;
}

Pipeline select_pipeline(double specialized_average, double generic_average, double epsilon, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  if (unit(rng) < epsilon || specialized_average == generic_average) {
    return coin(rng) ? Pipeline::Specialized : Pipeline::Generic;
  }
  return specialized_average > generic_average ? Pipeline::Specialized : Pipeline::Generic;
}

BanditState::BanditState(double epsilon, std::size_t window, std::uint64_t seed)
    : epsilon_(epsilon), window_size_(window), rng_(seed) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (window == 0) throw std::invalid_argument("window must be positive");
}

Pipeline BanditState::select() {
  return select_pipeline(average(Pipeline::Specialized), average(Pipeline::Generic), epsilon_, rng_);
}

void BanditState::record(Pipeline arm, bool useful) {
  auto& b = buffer(arm);
  b.push_back(useful ? 1 : 0);
  while (b.size() > window_size_) b.pop_front();
}

void BanditState::reset() {
  specialized_.clear();
  generic_.clear();
}

double BanditState::average(Pipeline arm) const {
  const auto& b = window(arm);
  if (b.empty()) return kEmptyWindowAverage;
  double sum = 0.0;
  for (auto r : b) sum += r;
  return sum / static_cast<double>(b.size());
}

std::size_t BanditState::count(Pipeline arm) const { return window(arm).size(); }

const std::deque<std::uint8_t>& BanditState::window(Pipeline arm) const {
  return arm == Pipeline::Specialized ? specialized_ : generic_;
}

}  // namespace tailorsql::serve
