#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

// Raised for inputs outside an operation's mathematical domain or for
// violated preconditions. Maps to CLI exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// No admissible curve exists for the requested boundary data.
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// An iterative method hit its iteration cap. Maps to CLI exit code 3.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace elastica
