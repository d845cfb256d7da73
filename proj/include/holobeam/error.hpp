#pragma once

#include <stdexcept>
#include <string>

namespace holobeam {

enum class ErrorKind {
  invalid_config,
  invalid_argument,
  insufficient_budget,
  budget_exhausted,
  degenerate_gap,
  io_error,
  parse_error,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace holobeam
