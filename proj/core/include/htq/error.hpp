#pragma once

#include <stdexcept>
#include <string>

namespace htq {

/// Precondition violated by the caller (bad sizes, indices, parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Function evaluated outside the set where it is defined (e.g. the kernel on its diagonal).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dense system whose factorization hit a vanishing pivot.
class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical construction that should not fail did (non-converged iteration, ...).
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Oracle truncation levels disagree beyond the requested tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace htq
