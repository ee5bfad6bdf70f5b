#include "carmkit/lbuilder.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <mpfr.h>

#include "carmkit/harvest.hpp"

namespace carmkit {

Modulus make_modulus(const std::vector<Natural>& primes) {
    if (primes.empty())
        throw DomainError("modulus: empty prime set (L must be >= 2)");
    std::vector<Natural> sorted = primes;
    std::sort(sorted.begin(), sorted.end());
    Modulus m;
    Natural prev = 1;
    m.value = 1;
    m.lambda = 1;
    for (const auto& q : sorted) {
        if (q == prev)
            throw DomainError("modulus: repeated prime " + q.get_str());
        if (!is_prime(q))
            throw DomainError("modulus: " + q.get_str() + " is not prime");
        prev = q;
        m.prime_factors.push_back(q);
        m.value *= q;
        Natural qm1 = q - 1;
        mpz_lcm(m.lambda.get_mpz_t(), m.lambda.get_mpz_t(), qm1.get_mpz_t());
    }
    return m;
}

Modulus assemble_L(const SmoothPrimeSet& q, const std::set<Natural>& excluded) {
    for (const auto& e : excluded)
        if (std::find(q.primes.begin(), q.primes.end(), e) == q.primes.end())
            throw DomainError("assemble_L: excluded prime " + e.get_str() + " not in Q");
    std::vector<Natural> keep;
    for (const auto& p : q.primes)
        if (!excluded.count(p))
            keep.push_back(p);
    return make_modulus(keep);
}

namespace {

// ln of an arbitrary-precision integer at 256-bit precision.
double mpz_log(const Natural& n, mpfr_prec_t prec = 256) {
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_set_z(t, n.get_mpz_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    double r = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return r;
}

// lambda <= e^{bound_exponent}, decided by comparing ln(lambda) with the
// exponent at 256-bit precision (the exponent is never exactly ln(lambda)
// for integral lambda > 1, so this precision settles the comparison).
bool exp_bound_holds(const Natural& lambda, double theta, uint64_t y) {
    mpfr_t lhs, rhs;
    mpfr_init2(lhs, 256);
    mpfr_init2(rhs, 256);
    mpfr_set_z(lhs, lambda.get_mpz_t(), MPFR_RNDN);
    mpfr_log(lhs, lhs, MPFR_RNDN);
    mpfr_set_d(rhs, theta, MPFR_RNDN);
    mpfr_mul_ui(rhs, rhs, 2 * y, MPFR_RNDN);
    bool holds = mpfr_cmp(lhs, rhs) <= 0;
    mpfr_clear(lhs);
    mpfr_clear(rhs);
    return holds;
}

} // namespace

LambdaBoundReport lambda_bound_check(const Modulus& l, const SieveParams& params) {
    LambdaBoundReport r;
    r.lambda = l.lambda;
    r.log_lambda = mpz_log(l.lambda);
    r.log_bound = 2.0 * params.theta * static_cast<double>(params.y);
    r.holds = exp_bound_holds(l.lambda, params.theta, params.y);

    r.log_L = mpz_log(l.value);
    SmoothPrimeSet as_set{params, l.prime_factors};
    double ratio = density_report(as_set);
    double yt = std::pow(static_cast<double>(params.y), params.theta);
    r.log_L_shape = 2.0 * params.theta * ratio * yt;
    r.l_within_shape = r.log_L <= r.log_L_shape;

    for (const auto& q : l.prime_factors)
        r.reciprocal_sum += 1.0 / mpz_get_d(mpz_class(q - 1).get_mpz_t());
    return r;
}

std::pair<Modulus, PruneLog> prune_exceptional(const Modulus& l, const Natural& x,
                                               uint64_t sample_divisors,
                                               const PruneOptions& opts) {
    if (x < 2)
        throw DomainError("prune_exceptional: x must be >= 2");
    PruneLog log;
    if (sample_divisors == 0)
        return {l, log};
    if (!x.fits_ulong_p() || x > 100'000'000)
        throw DomainError("prune_exceptional: x too large for direct AP counting");
    uint64_t xu = x.get_ui();

    // Divisor size cap x^B.
    double cap_d = std::pow(static_cast<double>(xu), opts.b_exponent);
    Natural cap = static_cast<unsigned long>(std::floor(cap_d));
    if (cap < 2)
        return {l, log};

    auto divisors = enumerate_divisors(l, cap);
    std::vector<Natural> candidates;
    for (const auto& d : divisors)
        if (d >= 2)
            candidates.push_back(d);
    if (candidates.empty())
        return {l, log};

    // Deterministic sample without replacement.
    std::mt19937_64 rng(opts.seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    if (candidates.size() > sample_divisors)
        candidates.resize(sample_divisors);
    std::sort(candidates.begin(), candidates.end());
    log.divisors_sampled = candidates.size();

    auto primes = sieve_primes(xu);
    double pi_x = static_cast<double>(primes.size());

    std::set<Natural> marked;
    for (const auto& d : candidates) {
        uint64_t du = d.get_ui();
        uint64_t count = 0;
        for (uint32_t p : primes)
            if (p % du == 1)
                ++count;
        // phi(d) for squarefree d is the product of (q - 1).
        Natural phi = 1;
        Natural largest = 0;
        for (const auto& q : l.prime_factors) {
            if (mpz_divisible_p(d.get_mpz_t(), q.get_mpz_t())) {
                phi *= q - 1;
                largest = q;
            }
        }
        double threshold = pi_x / (2.0 * mpz_get_d(phi.get_mpz_t()));
        if (static_cast<double>(count) < threshold) {
            marked.insert(largest);
            log.removals.push_back({d, largest, count, threshold});
        }
    }

    if (marked.empty())
        return {l, log};
    std::vector<Natural> keep;
    for (const auto& q : l.prime_factors)
        if (!marked.count(q))
            keep.push_back(q);
    return {make_modulus(keep), log};
}

} // namespace carmkit
