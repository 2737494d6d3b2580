#pragma once

#include <stdexcept>
#include <string>

namespace rgroups {

/// A precondition of a domain operation failed (bad parameters, violated hypothesis).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Work or memory required exceeds the configured budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text input (presentation file, expression, range) could not be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A certificate is structurally malformed. Distinct from a replay mismatch,
/// which is reported as `false` by the checker.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rgroups
