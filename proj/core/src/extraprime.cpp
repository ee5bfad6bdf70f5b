#include "carmkit/extraprime.hpp"

#include <cmath>
#include <numeric>

namespace carmkit {

namespace {

double ln_mpz(const Natural& n) {
    signed long exp = 0;
    double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

} // namespace

Natural default_k1_max(const Natural& modulus_base) {
    double lb = ln_mpz(modulus_base);
    double conjectural = 100.0 * lb * lb;
    Natural ceiling = 1'000'000ul;
    if (conjectural > 1e6)
        ceiling = static_cast<unsigned long>(std::ceil(conjectural));
    return ceiling;
}

ExtraPrime find_k1_for_base(const Natural& modulus_base, const Natural& k1_max_in) {
    if (modulus_base < 2)
        throw DomainError("find_k1: modulus base must be >= 2");
    Natural k1_max = k1_max_in;
    if (k1_max < 1)
        k1_max = default_k1_max(modulus_base);

    for (Natural k1 = 1; k1 <= k1_max; ++k1) {
        Natural p = modulus_base * k1 + 1;
        if (is_prime(p)) {
            ExtraPrime out{k1, p, modulus_base, 0.0};
            if (modulus_base >= 3) {
                double lb = ln_mpz(modulus_base);
                out.hb_ratio = mpz_get_d(mpz_class(p - 1).get_mpz_t()) /
                               (mpz_get_d(modulus_base.get_mpz_t()) * lb * lb);
            }
            return out;
        }
    }
    throw BudgetExceeded("find_k1: no prime of the form " + modulus_base.get_str() +
                         "*k1 + 1 for k1 in [1, " + k1_max.get_str() + "]");
}

ExtraPrime find_k1(const Modulus& l, const Natural& k0, const Natural& k1_max) {
    return find_k1_for_base(l.value * k0, k1_max);
}

HbGaugeReport heathbrown_gauge(uint64_t d_max, uint64_t residue) {
    if (d_max < 2)
        throw DomainError("heathbrown_gauge: d_max must be >= 2");
    HbGaugeReport rep;
    rep.d_max = d_max;
    rep.residue = residue;
    rep.table.reserve(d_max);
    for (uint64_t d = 2; d <= d_max; ++d) {
        if (std::gcd(d, residue) != 1)
            continue;
        uint64_t p = residue % d;
        if (p == 0)
            p = d;
        while (!is_prime_u64(p))
            p += d;
        HbRow row{d, p, 0.0};
        if (d >= 3) {
            double ld = std::log(static_cast<double>(d));
            row.ratio = static_cast<double>(p) / (static_cast<double>(d) * ld * ld);
            if (row.ratio > rep.max_ratio) {
                rep.max_ratio = row.ratio;
                rep.argmax_d = d;
            }
        }
        rep.table.push_back(row);
    }
    return rep;
}

} // namespace carmkit
