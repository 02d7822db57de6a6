#include "sinest/error.hpp"

namespace sinest {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_frequency: return "invalid-frequency";
    case ErrorKind::degenerate_basis: return "degenerate-basis";
    case ErrorKind::ill_conditioned: return "ill-conditioned";
    case ErrorKind::diverged: return "diverged";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::unsupported_format: return "unsupported-format";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::undefined_metric: return "undefined-metric";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace sinest
