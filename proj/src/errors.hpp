#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rist {

// Base class for all library errors so the C API can map them to codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent vector/matrix shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input outside the mathematical domain of an operation (casin outside the
// unit box, non-positive distance, degenerate covariance, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Configuration file / value problems. Collects every violation found so a
// bad config is reported in one pass.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& e : v) {
      s += "\n  - ";
      s += e;
    }
    return s;
  }
  std::vector<std::string> issues_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rist
