#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsynch {

enum class ErrorKind {
  invalid_parameter,
  numerical_inconsistency,
  numerical_overflow,
  numerical_nonconvergence,
  resource_limit,
  divergent_series,
  config_error,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::numerical_inconsistency: return "numerical-inconsistency";
    case ErrorKind::numerical_overflow: return "numerical-overflow";
    case ErrorKind::numerical_nonconvergence: return "numerical-nonconvergence";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::divergent_series: return "divergent-series";
    case ErrorKind::config_error: return "config-error";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::invalid_parameter, what);
}

}  // namespace gsynch
