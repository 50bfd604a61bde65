#pragma once

#include <stdexcept>
#include <string>

namespace mgap {

// Invalid user-facing configuration: bad parameter ranges, malformed specs,
// unknown registry names. Messages name the offending field.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A request whose honest execution would exceed a configured budget
// (path lengths, matrix sizes). Distinct from config_error so callers can
// retry with a smaller problem.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure inside a model fit (singular systems, failed
// factorizations) on otherwise admissible input.
class fit_error : public std::runtime_error {
 public:
  explicit fit_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mgap
