#pragma once

#include <stdexcept>
#include <string>

namespace carmkit {

// Bad input: precondition violated by the caller.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A search or factorization exhausted its configured budget without an
// answer. Carries no wrong result, only the admission of failure.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant broke (e.g. a certificate failed Korselt after
// upstream stages vouched for its parts). Always a bug, never user error.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace carmkit
