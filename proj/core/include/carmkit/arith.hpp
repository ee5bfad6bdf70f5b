#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "carmkit/errors.hpp"

namespace carmkit {

// All integer quantities in the pipeline. Serializes as a decimal string.
using Natural = mpz_class;

struct PrimeFactor {
    Natural prime;
    unsigned exponent = 1;
};

// Complete factorization, primes strictly increasing.
struct Factorization {
    std::vector<PrimeFactor> factors;

    Natural value() const;
    bool valid_for(const Natural& n) const;
};

struct FactorizeOptions {
    uint64_t trial_bound = 100'000;   // trial division up to min(trial_bound, sqrt n)
    uint64_t rho_budget = 20'000'000; // total Brent-rho iterations before giving up
};

struct IsPrimeOptions {
    // Extra Miller-Rabin rounds on top of the baseline BPSW test for n >= 2^64.
    // Below 2^64 the test is deterministic regardless of this setting.
    unsigned extra_rounds = 0;
};

// Deterministic for n < 2^64 (fixed 12-witness strong-probable-prime set);
// BPSW (base-2 strong PRP + strong Lucas) above, plus extra_rounds MR bases.
bool is_prime(const Natural& n, const IsPrimeOptions& opts = {});
bool is_prime_u64(uint64_t n);

// Throws DomainError for n < 2, BudgetExceeded when the rho budget runs out.
Factorization factorize(const Natural& n, const FactorizeOptions& opts = {});

Natural largest_prime_factor(const Natural& n, const FactorizeOptions& opts = {});

// Exponent of (Z/m)^* given the factorization of m.
Natural carmichael_lambda(const Factorization& f);

// Primes <= limit, by sieve of Eratosthenes.
std::vector<uint32_t> sieve_primes(uint64_t limit);

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m);

} // namespace carmkit
