#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "carmkit/arith.hpp"
#include "carmkit/harvest.hpp"

namespace carmkit {

// Direct product of cyclic groups, written additively for brute-force work.
struct GroupSpec {
    std::vector<uint64_t> cyclic_orders;

    uint64_t order() const;
    uint64_t exponent() const; // lcm of the cyclic orders
};

struct BruteForceOptions {
    uint64_t order_limit = 64;
};

// Smallest n such that every length-n sequence over g contains a nonempty
// subsequence with identity product (the Davenport constant).
uint64_t davenport_bruteforce(const GroupSpec& g, const BruteForceOptions& opts = {});

// van Emde Boas-Kruyswijk / Meshulam bound: ceil(lambda * (1 + ln|G|/lambda)).
Natural davenport_bound(const Natural& lambda_g, const Natural& order_g);

struct AgpCheckReport {
    uint64_t n = 0; // Davenport constant of the group
    uint64_t r = 0;
    uint64_t t = 0;
    uint64_t trials = 0;
    double bound = 0.0;          // C(r,t) / C(r,n)
    uint64_t min_observed = 0;   // over all trials
    uint64_t violations = 0;     // trials falling below the bound
};

// For seeded random length-r sequences, exhaustively counts subsequences of
// length in [t-n, t] with identity product and compares against the
// subsequence-counting bound. A violation would be an implementation bug.
AgpCheckReport agp_count_check(const GroupSpec& g, uint64_t r, uint64_t t,
                               uint64_t trials, uint64_t seed = 1);

struct ZeroSumFamily {
    Natural modulus;
    uint64_t h = 0;
    std::vector<std::vector<Natural>> sets; // each sorted, size h, product = 1 mod modulus
    uint64_t disjoint_count = 0;            // size of greedy pairwise-disjoint subfamily
};

struct ZeroSumOptions {
    uint64_t exhaustive_threshold = 1u << 21; // C(N, h) above this switches to MITM
    uint64_t target_count = 32;
};

// For each h in [h_min, h_max], subsets of the pool of size h whose product
// is 1 mod m. Exhaustive below the threshold, meet-in-the-middle above it.
// When disjoint is set, each family's sets are a greedy pairwise-disjoint
// extraction of everything found.
std::map<uint64_t, ZeroSumFamily> find_zero_sum_sets(const HarvestedPrimes& pool,
                                                     const Natural& m, uint64_t h_min,
                                                     uint64_t h_max, uint64_t target_count,
                                                     bool disjoint,
                                                     const ZeroSumOptions& opts = {});

struct HSelection {
    uint64_t h = 0;
    bool window_fallback = false; // no nonempty family inside [n_bound, 2 n_bound]
};

// h in [n_bound, 2*n_bound] maximizing the family size; ties to the smaller
// h; falls back to the full searched range when the window is empty.
HSelection select_h(const std::map<uint64_t, ZeroSumFamily>& families, uint64_t n_bound);

} // namespace carmkit
