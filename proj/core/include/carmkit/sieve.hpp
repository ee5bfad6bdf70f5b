#pragma once

#include <cstdint>
#include <vector>

#include "carmkit/arith.hpp"

namespace carmkit {

struct SieveParams {
    uint64_t y = 10;
    double theta = 1.5; // must lie in the open interval (1, 2)
};

// Primes q in [ceil(y^theta / ln y), floor(y^theta)] whose q-1 is y-smooth.
struct SmoothPrimeSet {
    SieveParams params;
    std::vector<Natural> primes;
};

struct SieveOptions {
    uint64_t interval_cap = 100'000'000; // refuse intervals reaching past this
};

// Interval endpoints as the sieve computes them. Natural logarithm throughout.
uint64_t sieve_lower_bound(const SieveParams& params);
uint64_t sieve_upper_bound(const SieveParams& params);

SmoothPrimeSet build_Q(const SieveParams& params, const SieveOptions& opts = {});

// |Q| / (y^theta / ln(y^theta)). Reported, never asserted against.
double density_report(const SmoothPrimeSet& q);

} // namespace carmkit
