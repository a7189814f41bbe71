#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tailorsql {

struct Diagnostic {
  std::string code;     // short machine-readable tag, e.g. "lex_error"
  std::string subject;  // id of the record / document the diagnostic is about
  std::string message;
};

// Collects non-fatal problems encountered by batch operations. Batch jobs never
// abort on a bad record; they note it here and move on.
class Diagnostics {
 public:
  void add(std::string code, std::string subject, std::string message) {
    items_.push_back({std::move(code), std::move(subject), std::move(message)});
  }

  [[nodiscard]] const std::vector<Diagnostic>& items() const noexcept { return items_; }
  [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }

  [[nodiscard]] std::size_t count(std::string_view code) const {
    std::size_t n = 0;
    for (const auto& d : items_) {
      if (d.code == code) ++n;
    }
    return n;
  }

  void append(const Diagnostics& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
  }

 private:
  std::vector<Diagnostic> items_;
};

}  // namespace tailorsql
