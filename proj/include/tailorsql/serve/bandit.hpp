#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string_view>

namespace tailorsql::serve {

enum class Pipeline { Specialized, Generic };

std::string_view to_string(Pipeline p);
std::optional<Pipeline> pipeline_from_string(std::string_view s);

// Average of an empty reward window.
inline constexpr double kEmptyWindowAverage = 0.5;

// One ε-greedy draw: with probability ε a uniformly random arm, otherwise the
// arm with the higher average, exact ties broken uniformly at random.
Pipeline select_pipeline(double specialized_average, double generic_average, double epsilon, std::mt19937_64& rng);

// ε-greedy routing over two arms with count-based sliding windows.
class BanditState {
 public:
  BanditState(double epsilon = 0.1, std::size_t window = 100, std::uint64_t seed = 42);

  Pipeline select();
  void record(Pipeline arm, bool useful);
  void reset();  // empties both windows; ε, W and the RNG stream are kept

  [[nodiscard]] double average(Pipeline arm) const;
  [[nodiscard]] std::size_t count(Pipeline arm) const;
  [[nodiscard]] const std::deque<std::uint8_t>& window(Pipeline arm) const;
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] std::size_t window_size() const noexcept { return window_size_; }

 private:
  std::deque<std::uint8_t>& buffer(Pipeline arm) { return arm == Pipeline::Specialized ? specialized_ : generic_; }

  double epsilon_;
  std::size_t window_size_;
  std::mt19937_64 rng_;
  std::deque<std::uint8_t> specialized_;
  std::deque<std::uint8_t> generic_;
};

}  // namespace tailorsql::serve
