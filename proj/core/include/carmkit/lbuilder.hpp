#pragma once

#include <set>
#include <string>
#include <vector>

#include "carmkit/arith.hpp"
#include "carmkit/sieve.hpp"

namespace carmkit {

// Squarefree modulus with its factor list and Carmichael lambda.
struct Modulus {
    Natural value;
    std::vector<Natural> prime_factors; // strictly increasing, all prime
    Natural lambda;                     // lcm of (q - 1) over prime_factors
};

Modulus make_modulus(const std::vector<Natural>& primes);

// Product over Q minus the excluded primes. Throws if nothing remains.
Modulus assemble_L(const SmoothPrimeSet& q, const std::set<Natural>& excluded = {});

struct LambdaBoundReport {
    Natural lambda;
    double log_lambda = 0.0;     // ln lambda
    double log_bound = 0.0;      // 2 * theta * y
    bool holds = false;          // lambda <= e^{2 theta y}, decided at 256-bit precision
    double log_L = 0.0;          // ln L
    double log_L_shape = 0.0;    // density-ratio analogue of the L size bound
    bool l_within_shape = false;
    double reciprocal_sum = 0.0; // sum of 1/(q-1) over q | L; reported only
};

LambdaBoundReport lambda_bound_check(const Modulus& l, const SieveParams& params);

struct PruneRemoval {
    Natural divisor;        // the divisor that failed the AP-count inequality
    Natural removed_prime;  // its largest prime factor, dropped from L
    uint64_t ap_count = 0;  // primes <= x congruent 1 mod divisor
    double threshold = 0.0; // pi(x) / (2 phi(divisor))
};

struct PruneLog {
    uint64_t divisors_sampled = 0;
    std::vector<PruneRemoval> removals;
};

struct PruneOptions {
    double b_exponent = 5.0 / 12.0; // divisor size cap is x^B
    uint64_t seed = 1;
};

// Empirical stand-in for discarding the exceptional divisors: sample divisors
// d | L with d <= x^B, count primes p <= x with p = 1 (mod d), and drop the
// largest prime factor of any d whose count falls below pi(x) / (2 phi(d)).
std::pair<Modulus, PruneLog> prune_exceptional(const Modulus& l, const Natural& x,
                                               uint64_t sample_divisors,
                                               const PruneOptions& opts = {});

} // namespace carmkit
