#pragma once

#include <cstddef>
#include <functional>
#include <string_view>

namespace tailorsql::retrieve {

// Whitespace mode: maximal runs of word characters count once, every
// punctuation character counts as its own token. "a,b" -> 3.
std::size_t count_tokens(std::string_view text);

// Token counting strategy. Defaults to count_tokens; a generative provider may
// install its own counter.
class TokenCounter {
 public:
  TokenCounter() = default;
  explicit TokenCounter(std::function<std::size_t(std::string_view)> fn) : fn_(std::move(fn)) {}

  std::size_t operator()(std::string_view text) const { return fn_ ? fn_(text) : count_tokens(text); }
  [[nodiscard]] bool is_whitespace_mode() const noexcept { return !fn_; }

 private:
  std::function<std::size_t(std::string_view)> fn_;
};

}  // namespace tailorsql::retrieve
