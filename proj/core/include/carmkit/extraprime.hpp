#pragma once

#include <cstdint>
#include <vector>

#include "carmkit/arith.hpp"
#include "carmkit/lbuilder.hpp"

namespace carmkit {

struct ExtraPrime {
    Natural k1;
    Natural p;            // L * k0 * k1 + 1, prime
    Natural modulus_base; // L * k0
    double hb_ratio = 0.0; // (p - 1) / (base * ln^2 base)
};

// Default search ceiling: max(10^6, ceil(100 * ln^2 base)).
Natural default_k1_max(const Natural& modulus_base);

// Minimal k1 <= k1_max with base * k1 + 1 prime. Throws BudgetExceeded
// (naming the searched range) when none exists below the ceiling.
ExtraPrime find_k1(const Modulus& l, const Natural& k0, const Natural& k1_max = 0);
ExtraPrime find_k1_for_base(const Natural& modulus_base, const Natural& k1_max = 0);

struct HbRow {
    uint64_t d = 0;
    uint64_t least_prime = 0;
    double ratio = 0.0; // least_prime / (d * ln^2 d), for d >= 3
};

struct HbGaugeReport {
    uint64_t d_max = 0;
    uint64_t residue = 1;
    double max_ratio = 0.0;
    uint64_t argmax_d = 0;
    std::vector<HbRow> table;
};

// Least prime congruent to residue mod d for every d <= d_max coprime to
// residue. Observational: the conjectured bound is measured, never asserted.
HbGaugeReport heathbrown_gauge(uint64_t d_max, uint64_t residue = 1);

} // namespace carmkit
