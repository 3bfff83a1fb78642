#pragma once

#include <stdexcept>
#include <string>

namespace frif {

enum class ErrorKind {
  malformed_data,
  malformed_parameters,
  validation,
  necessary_condition,
  resource_limit,
  denominator_positivity,
  contraction_violation,
  smoothness_order,
  divergent_bound,
  insufficient_data,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so that the CLI and
/// HTTP layers can map it onto exit codes and status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace frif
