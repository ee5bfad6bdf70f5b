#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carmkit/arith.hpp"
#include "carmkit/extraprime.hpp"
#include "carmkit/zerosum.hpp"

namespace carmkit {

enum class CountClass { prime, perfect_square, perfect_cube, perfect_power, none };

std::string to_string(CountClass c);
std::optional<CountClass> count_class_from_string(const std::string& s);

// Classification of a factor count: prime wins, then square, cube, power.
CountClass classify_factor_count(uint64_t count);

struct CarmichaelCertificate {
    Natural n;
    std::vector<Natural> factors; // strictly increasing distinct primes
    uint64_t g = 0;
    uint64_t h = 0;
    bool includes_extra_prime = false;
    uint64_t factor_count = 0;
    CountClass count_class = CountClass::none;
    std::vector<Natural> korselt_witnesses; // (n-1)/(p-1) per factor, exact
};

struct KorseltReport {
    bool ok = false;
    std::string failure; // empty when ok
    Natural n;
    std::vector<Natural> witnesses; // (n-1)/(p-1) per factor when ok
};

// Ground truth for everything this library emits: distinct primes, >= 3 of
// them, n odd, and (p-1) | (n-1) for each, plus a 20-base Fermat spot-check.
KorseltReport verify_korselt(const std::vector<Natural>& factors);

// Smallest g <= g_max with g*h + 1 prime (class prime), or the minimal g
// making g*h a perfect square / cube / power_exponent-th power. The minimal
// multiplier equals h (square) and h^2 (cube) whenever h is squarefree.
uint64_t find_g0(uint64_t h, CountClass count_class, uint64_t g_max, unsigned power_exponent = 4);

// n = [extra prime] * product over the union of the given pairwise-disjoint
// zero-sum sets. The certificate is Korselt-verified before it is returned.
CarmichaelCertificate assemble_carmichael(const std::vector<std::vector<Natural>>& sets,
                                          const std::optional<ExtraPrime>& extra,
                                          const Natural& m);

// Chernick triples 6k+1, 12k+1, 18k+1 for k <= k_max.
std::vector<CarmichaelCertificate> chernick_search(uint64_t k_max);

} // namespace carmkit
