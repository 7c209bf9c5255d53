#pragma once

#include <stdexcept>
#include <string>

namespace fskjcr {

// Raised for arguments outside an operation's domain (bad indices, grid points
// outside the sidelobe domain, malformed distributions, enumeration budgets).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised when an exhaustive enumeration would exceed its configured budget.
class BudgetExceeded : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace fskjcr
