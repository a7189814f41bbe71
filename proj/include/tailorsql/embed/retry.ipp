#pragma once

#include <thread>

#include "tailorsql/errors.hpp"

namespace tailorsql::embed {

template <typename Fn>
auto with_retry(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
  auto delay = policy.backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const ProviderUnavailable&) {
      if (attempt >= policy.attempts) throw;
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
}

}  // namespace tailorsql::embed
