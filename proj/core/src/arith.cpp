#include "carmkit/arith.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace carmkit {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1)
            result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

namespace {

bool strong_probable_prime_u64(uint64_t n, uint64_t a) {
    a %= n;
    if (a == 0)
        return true;
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

// This witness set is deterministic for all n < 2^64 (Sorenson-Webster).
constexpr std::array<uint64_t, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool strong_probable_prime_mpz(const mpz_class& n, const mpz_class& a) {
    mpz_class nm1 = n - 1;
    mpz_class d = nm1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    mpz_class x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1)
        return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == nm1)
            return true;
    }
    return false;
}

// Strong Lucas probable-prime test with Selfridge parameter selection.
// Assumes n odd, > 3, not a perfect square.
bool strong_lucas_probable_prime(const mpz_class& n) {
    long d_abs = 5;
    int sign = 1;
    mpz_class D;
    for (;;) {
        D = sign * d_abs;
        int j = mpz_jacobi(D.get_mpz_t(), n.get_mpz_t());
        if (j == -1)
            break;
        if (j == 0 && mpz_cmpabs(D.get_mpz_t(), n.get_mpz_t()) != 0)
            return false; // shares a factor with n
        d_abs += 2;
        sign = -sign;
    }
    // P = 1, Q = (1 - D) / 4
    mpz_class Q = (1 - D) / 4;
    mpz_class Qmod = Q % n;
    if (Qmod < 0)
        Qmod += n;

    mpz_class delta = n + 1;
    unsigned long s = mpz_scan1(delta.get_mpz_t(), 0);
    mpz_class q = delta;
    mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);

    auto halve = [&](mpz_class& v) {
        if (mpz_odd_p(v.get_mpz_t()))
            v += n;
        v >>= 1;
        v %= n;
    };

    // Binary ladder over the bits of q computing U_q, V_q, Q^q mod n.
    mpz_class U = 1, V = 1, Qk = Qmod; // values for k = 1 (U_1=1, V_1=P=1)
    long bits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
    for (long i = bits - 2; i >= 0; --i) {
        // double: k -> 2k
        U = (U * V) % n;
        V = (V * V - 2 * Qk) % n;
        if (V < 0)
            V += n;
        Qk = (Qk * Qk) % n;
        if (mpz_tstbit(q.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            // increment: 2k -> 2k+1 (with P = 1)
            mpz_class U2 = U + V;
            mpz_class V2 = D * U + V;
            halve(U2);
            halve(V2);
            if (U2 < 0)
                U2 += n;
            if (V2 < 0)
                V2 += n;
            U = U2;
            V = V2;
            Qk = (Qk * Qmod) % n;
        }
    }
    if (U == 0 || V == 0)
        return true;
    for (unsigned long r = 1; r < s; ++r) {
        V = (V * V - 2 * Qk) % n;
        if (V < 0)
            V += n;
        if (V == 0)
            return true;
        Qk = (Qk * Qk) % n;
    }
    return false;
}

} // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2)
        return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p)
            return true;
        if (n % p == 0)
            return false;
    }
    for (uint64_t a : kWitnesses)
        if (!strong_probable_prime_u64(n, a))
            return false;
    return true;
}

bool is_prime(const Natural& n, const IsPrimeOptions& opts) {
    if (n < 2)
        return false;
    if (n.fits_ulong_p() && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64)
        return is_prime_u64(n.get_ui());

    // Above 64 bits: small-prime screen, base-2 strong PRP, strong Lucas.
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                       29ull, 31ull, 37ull, 41ull, 43ull, 47ull, 53ull, 59ull, 61ull}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p))
            return false;
    }
    if (mpz_perfect_square_p(n.get_mpz_t()))
        return false;
    if (!strong_probable_prime_mpz(n, 2))
        return false;
    if (!strong_lucas_probable_prime(n))
        return false;
    // Optional extra MR rounds with fixed prime bases.
    static constexpr std::array<uint64_t, 16> kExtraBases = {
        3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59};
    for (unsigned i = 0; i < opts.extra_rounds && i < kExtraBases.size(); ++i)
        if (!strong_probable_prime_mpz(n, kExtraBases[i]))
            return false;
    return true;
}

Natural Factorization::value() const {
    Natural v = 1;
    for (const auto& pf : factors) {
        Natural pw;
        mpz_pow_ui(pw.get_mpz_t(), pf.prime.get_mpz_t(), pf.exponent);
        v *= pw;
    }
    return v;
}

bool Factorization::valid_for(const Natural& n) const {
    Natural prev = 1;
    for (const auto& pf : factors) {
        if (pf.prime <= prev || pf.exponent == 0 || !is_prime(pf.prime))
            return false;
        prev = pf.prime;
    }
    return value() == n;
}

namespace {

// Brent's cycle-finding variant of Pollard rho. Returns a nontrivial factor
// or nullopt when the iteration budget runs out. n must be odd composite.
std::optional<mpz_class> brent_rho(const mpz_class& n, uint64_t& budget, unsigned long seed_c) {
    mpz_class y = 2 + static_cast<long>(seed_c % 7), c = 1 + static_cast<long>(seed_c), m = 128;
    mpz_class g = 1, r = 1, q = 1, x, ys;
    while (g == 1) {
        x = y;
        for (mpz_class i = 0; i < r; ++i)
            y = (y * y + c) % n;
        mpz_class k = 0;
        while (k < r && g == 1) {
            ys = y;
            mpz_class lim = std::min(m, mpz_class(r - k));
            for (mpz_class i = 0; i < lim; ++i) {
                if (budget == 0)
                    return std::nullopt;
                --budget;
                y = (y * y + c) % n;
                mpz_class diff = x > y ? x - y : y - x;
                q = (q * diff) % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += lim;
        }
        r *= 2;
    }
    if (g == n) {
        // backtrack one step at a time
        do {
            if (budget == 0)
                return std::nullopt;
            --budget;
            ys = (ys * ys + c) % n;
            mpz_class diff = x > ys ? x - ys : ys - x;
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    if (g == n)
        return std::nullopt; // cycle degenerated; caller retries with a new c
    return g;
}

void factor_recursive(const mpz_class& n, std::vector<mpz_class>& out, uint64_t& budget) {
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    for (unsigned long c = 1; c <= 20; ++c) {
        if (budget == 0)
            break;
        auto f = brent_rho(n, budget, c);
        if (f) {
            factor_recursive(*f, out, budget);
            factor_recursive(n / *f, out, budget);
            return;
        }
    }
    throw BudgetExceeded("factorize: rho budget exhausted on composite cofactor " + n.get_str());
}

} // namespace

Factorization factorize(const Natural& n, const FactorizeOptions& opts) {
    if (n < 2)
        throw DomainError("factorize: n must be >= 2, got " + n.get_str());

    std::vector<mpz_class> primes_found;
    mpz_class rest = n;

    auto strip = [&](uint64_t p) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            primes_found.push_back(mpz_class(static_cast<unsigned long>(p)));
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        }
    };

    strip(2);
    strip(3);
    for (uint64_t p = 5; p <= opts.trial_bound && rest > 1; p += 6) {
        strip(p);
        strip(p + 2);
        if (rest > 1 && mpz_class(p + 2) * (p + 2) > rest) {
            // cofactor below (p+2)^2 with no divisor <= p+2 is prime
            primes_found.push_back(rest);
            rest = 1;
        }
    }
    if (rest > 1) {
        uint64_t budget = opts.rho_budget;
        factor_recursive(rest, primes_found, budget);
    }

    std::sort(primes_found.begin(), primes_found.end());
    Factorization f;
    for (const auto& p : primes_found) {
        if (!f.factors.empty() && f.factors.back().prime == p)
            ++f.factors.back().exponent;
        else
            f.factors.push_back({p, 1});
    }
    return f;
}

Natural largest_prime_factor(const Natural& n, const FactorizeOptions& opts) {
    if (n < 2)
        throw DomainError("largest_prime_factor: n must be >= 2, got " + n.get_str());
    return factorize(n, opts).factors.back().prime;
}

Natural carmichael_lambda(const Factorization& f) {
    Natural lambda = 1;
    for (const auto& pf : f.factors) {
        Natural contrib;
        if (pf.prime == 2) {
            if (pf.exponent == 1)
                contrib = 1;
            else if (pf.exponent == 2)
                contrib = 2;
            else {
                mpz_pow_ui(contrib.get_mpz_t(), mpz_class(2).get_mpz_t(), pf.exponent - 2);
            }
        } else {
            mpz_pow_ui(contrib.get_mpz_t(), pf.prime.get_mpz_t(), pf.exponent - 1);
            contrib *= pf.prime - 1;
        }
        mpz_lcm(lambda.get_mpz_t(), lambda.get_mpz_t(), contrib.get_mpz_t());
    }
    return lambda;
}

std::vector<uint32_t> sieve_primes(uint64_t limit) {
    std::vector<uint32_t> primes;
    if (limit < 2)
        return primes;
    std::vector<bool> composite(limit + 1, false);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<uint32_t>(i));
            for (uint64_t j = i * i; j <= limit; j += i)
                composite[j] = true;
        }
    }
    return primes;
}

} // namespace carmkit
