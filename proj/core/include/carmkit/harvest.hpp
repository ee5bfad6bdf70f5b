#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carmkit/arith.hpp"
#include "carmkit/lbuilder.hpp"

namespace carmkit {

struct HarvestEntry {
    Natural p; // prime, p = d * k + 1
    Natural d; // smallest divisor witness, d | L
};

struct HarvestedPrimes {
    Natural k;
    std::vector<HarvestEntry> entries; // sorted by p, deduplicated on p
    Natural x_bound;                   // 0 means unbounded
};

struct DivisorOptions {
    uint64_t max_divisors = 1u << 20;
};

// Every squarefree divisor d | L with d <= cap, increasing, each exactly once.
std::vector<Natural> enumerate_divisors(const Modulus& l, const Natural& cap,
                                        const DivisorOptions& opts = {});

// All divisors <= cap of an arbitrary factored value, increasing.
std::vector<Natural> enumerate_divisors(const Factorization& f, const Natural& cap,
                                        const DivisorOptions& opts = {});

HarvestedPrimes harvest_P_k(const Modulus& l, const Natural& k, const Natural& cap,
                            const Natural& x_bound = 0, const DivisorOptions& opts = {});

// Core harvest over an explicit divisor list (increasing, deduplicated).
HarvestedPrimes harvest_from_divisors(const std::vector<Natural>& divisors, const Natural& k,
                                      const Natural& x_bound = 0);

struct KScanRow {
    Natural k;
    uint64_t pool_size = 0;
};

struct K0Selection {
    Natural k0;
    HarvestedPrimes pool;
    std::vector<KScanRow> scan; // per-k pool sizes over the scanned range
};

// Argmax of |P_k| over [k_min, k_max]; ties go to the smaller k.
// Throws BudgetExceeded when every pool in the range is empty.
K0Selection select_k0(const Modulus& l, const Natural& k_min, const Natural& k_max,
                      const Natural& cap, const Natural& x_bound = 0,
                      const DivisorOptions& opts = {});

K0Selection select_k0_from_divisors(const std::vector<Natural>& divisors, const Natural& k_min,
                                    const Natural& k_max, const Natural& x_bound = 0);

} // namespace carmkit
