#include "carmkit/assemble.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace carmkit {

std::string to_string(CountClass c) {
    switch (c) {
    case CountClass::prime: return "prime";
    case CountClass::perfect_square: return "perfect_square";
    case CountClass::perfect_cube: return "perfect_cube";
    case CountClass::perfect_power: return "perfect_power";
    case CountClass::none: return "none";
    }
    return "none";
}

std::optional<CountClass> count_class_from_string(const std::string& s) {
    if (s == "prime") return CountClass::prime;
    if (s == "perfect_square" || s == "square") return CountClass::perfect_square;
    if (s == "perfect_cube" || s == "cube") return CountClass::perfect_cube;
    if (s == "perfect_power" || s == "power") return CountClass::perfect_power;
    if (s == "none") return CountClass::none;
    return std::nullopt;
}

CountClass classify_factor_count(uint64_t count) {
    Natural c = static_cast<unsigned long>(count);
    if (is_prime(c))
        return CountClass::prime;
    if (count >= 4 && mpz_perfect_square_p(c.get_mpz_t()))
        return CountClass::perfect_square;
    if (count >= 8) {
        Natural root;
        if (mpz_root(root.get_mpz_t(), c.get_mpz_t(), 3) != 0)
            return CountClass::perfect_cube;
        if (mpz_perfect_power_p(c.get_mpz_t()))
            return CountClass::perfect_power;
    }
    return CountClass::none;
}

KorseltReport verify_korselt(const std::vector<Natural>& factors) {
    KorseltReport rep;
    if (factors.size() < 2)
        throw DomainError("verify_korselt: need at least 2 factors");
    if (factors.size() < 3) {
        rep.failure = "a Carmichael number has at least 3 prime factors, got " +
                      std::to_string(factors.size());
        return rep;
    }
    std::set<Natural> distinct(factors.begin(), factors.end());
    if (distinct.size() != factors.size()) {
        rep.failure = "repeated factor (n would not be squarefree)";
        return rep;
    }
    Natural n = 1;
    for (const auto& p : factors) {
        if (!is_prime(p)) {
            rep.failure = "factor " + p.get_str() + " is not prime";
            return rep;
        }
        n *= p;
    }
    if (mpz_even_p(n.get_mpz_t())) {
        rep.failure = "n is even";
        return rep;
    }
    rep.n = n;
    Natural nm1 = n - 1;
    for (const auto& p : factors) {
        Natural pm1 = p - 1;
        if (!mpz_divisible_p(nm1.get_mpz_t(), pm1.get_mpz_t())) {
            rep.failure = "(p-1) does not divide (n-1) for p = " + p.get_str();
            return rep;
        }
        rep.witnesses.push_back(nm1 / pm1);
    }
    // Redundant Fermat spot-check; Korselt already decided the answer.
    std::mt19937_64 rng(0x5eedULL);
    for (int i = 0; i < 20; ++i) {
        Natural a = 2 + static_cast<unsigned long>(rng() % 1'000'000'007ull);
        a %= n;
        if (a < 2)
            a = 2;
        Natural r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t(), n.get_mpz_t());
        if (r != a % n)
            throw InternalError("verify_korselt: Fermat check contradicts Korselt for n = " +
                                n.get_str());
    }
    rep.ok = true;
    return rep;
}

uint64_t find_g0(uint64_t h, CountClass count_class, uint64_t g_max, unsigned power_exponent) {
    if (h < 1)
        throw DomainError("find_g0: h must be >= 1");
    switch (count_class) {
    case CountClass::prime:
        for (uint64_t g = 1; g <= g_max; ++g)
            if (is_prime_u64(g * h + 1))
                return g;
        throw BudgetExceeded("find_g0: no g <= " + std::to_string(g_max) + " with g*" +
                             std::to_string(h) + "+1 prime (raise g_max)");
    case CountClass::perfect_square:
    case CountClass::perfect_cube:
    case CountClass::perfect_power: {
        unsigned e = count_class == CountClass::perfect_square ? 2
                   : count_class == CountClass::perfect_cube   ? 3
                                                               : power_exponent;
        if (e < 2)
            throw DomainError("find_g0: power exponent must be >= 2");
        // Minimal g with g*h a perfect e-th power: complement each prime
        // exponent of h up to the next multiple of e.
        if (h == 1)
            return 1;
        auto f = factorize(Natural(static_cast<unsigned long>(h)));
        Natural g = 1;
        for (const auto& pf : f.factors) {
            unsigned rem = pf.exponent % e;
            if (rem != 0) {
                Natural pw;
                mpz_pow_ui(pw.get_mpz_t(), pf.prime.get_mpz_t(), e - rem);
                g *= pw;
            }
        }
        if (!g.fits_ulong_p())
            throw BudgetExceeded("find_g0: power complement overflows for h = " + std::to_string(h));
        return g.get_ui();
    }
    case CountClass::none:
        return 1;
    }
    throw DomainError("find_g0: unknown count class");
}

CarmichaelCertificate assemble_carmichael(const std::vector<std::vector<Natural>>& sets,
                                          const std::optional<ExtraPrime>& extra,
                                          const Natural& m) {
    std::set<Natural> used;
    std::vector<Natural> factors;
    uint64_t h = 0;
    for (const auto& s : sets) {
        if (h == 0)
            h = s.size();
        Natural prod = 1;
        for (const auto& p : s) {
            if (used.count(p))
                throw DomainError("assemble_carmichael: sets overlap at prime " + p.get_str());
            if (!mpz_divisible_p(m.get_mpz_t(), mpz_class(p - 1).get_mpz_t()))
                throw DomainError("assemble_carmichael: (p-1) does not divide M for p = " +
                                  p.get_str());
            used.insert(p);
            factors.push_back(p);
            prod = (prod * p) % m;
        }
        if (prod != 1 % m)
            throw DomainError("assemble_carmichael: set product is not 1 mod M");
    }
    if (extra) {
        if (used.count(extra->p))
            throw DomainError("assemble_carmichael: extra prime already appears in a set");
        if (m != extra->modulus_base * extra->k1)
            throw DomainError("assemble_carmichael: M does not equal base * k1 of the extra prime");
        factors.push_back(extra->p);
    }
    if (factors.size() < 3)
        throw DomainError("assemble_carmichael: fewer than 3 prime factors");

    std::sort(factors.begin(), factors.end());
    auto rep = verify_korselt(factors);
    if (!rep.ok)
        throw InternalError("assemble_carmichael: Korselt failed (" + rep.failure +
                            ") despite upstream invariants");

    CarmichaelCertificate cert;
    cert.n = rep.n;
    cert.factors = factors;
    cert.g = sets.size();
    cert.h = h;
    cert.includes_extra_prime = extra.has_value();
    cert.factor_count = factors.size();
    cert.count_class = classify_factor_count(cert.factor_count);
    cert.korselt_witnesses = rep.witnesses;
    return cert;
}

std::vector<CarmichaelCertificate> chernick_search(uint64_t k_max) {
    if (k_max < 1)
        throw DomainError("chernick_search: k_max must be >= 1");
    std::vector<CarmichaelCertificate> out;
    for (uint64_t k = 1; k <= k_max; ++k) {
        uint64_t a = 6 * k + 1, b = 12 * k + 1, c = 18 * k + 1;
        if (!is_prime_u64(a) || !is_prime_u64(b) || !is_prime_u64(c))
            continue;
        std::vector<Natural> factors = {Natural(static_cast<unsigned long>(a)),
                                        Natural(static_cast<unsigned long>(b)),
                                        Natural(static_cast<unsigned long>(c))};
        auto rep = verify_korselt(factors);
        if (!rep.ok)
            throw InternalError("chernick_search: triple failed Korselt at k = " +
                                std::to_string(k));
        CarmichaelCertificate cert;
        cert.n = rep.n;
        cert.factors = factors;
        cert.g = 1;
        cert.h = 3;
        cert.includes_extra_prime = false;
        cert.factor_count = 3;
        cert.count_class = classify_factor_count(3);
        cert.korselt_witnesses = rep.witnesses;
        out.push_back(std::move(cert));
    }
    return out;
}

} // namespace carmkit
