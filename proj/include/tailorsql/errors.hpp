#pragma once

#include <stdexcept>
#include <string>

namespace tailorsql {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unbalanced quotes, parentheses or comments in a SQL statement.
class LexError : public Error {
 public:
  using Error::Error;
};

class DuplicateTable : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptFile : public Error {
 public:
  using Error::Error;
};

// Raised by embedding / generative providers. Always retryable: the caller may
// try again later without changing its inputs.
class ProviderUnavailable : public Error {
 public:
  using Error::Error;
};

class NonFiniteGradient : public Error {
 public:
  using Error::Error;
};

class OutOfBounds : public Error {
 public:
  using Error::Error;
};

class UnknownQuestion : public Error {
 public:
  using Error::Error;
};

class DuplicateFeedback : public Error {
 public:
  using Error::Error;
};

class DisjointImpossible : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tailorsql
