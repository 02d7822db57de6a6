#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sinest {

enum class ErrorKind {
  invalid_argument,
  invalid_frequency,
  degenerate_basis,
  ill_conditioned,
  diverged,
  parse_error,
  unsupported_format,
  io_error,
  undefined_metric,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sinest
