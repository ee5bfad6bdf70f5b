#include "carmkit/sieve.hpp"

#include <cmath>
#include <stdexcept>

namespace carmkit {

namespace {

void check_params(const SieveParams& params) {
    if (params.y < 3)
        throw DomainError("sieve: y must be >= 3");
    if (!(params.theta > 1.0 && params.theta < 2.0))
        throw DomainError("sieve: theta must lie in (1, 2)");
}

} // namespace

uint64_t sieve_lower_bound(const SieveParams& params) {
    long double v = std::pow(static_cast<long double>(params.y), static_cast<long double>(params.theta)) /
                    std::log(static_cast<long double>(params.y));
    return static_cast<uint64_t>(std::ceil(v));
}

uint64_t sieve_upper_bound(const SieveParams& params) {
    long double v = std::pow(static_cast<long double>(params.y), static_cast<long double>(params.theta));
    return static_cast<uint64_t>(std::floor(v));
}

SmoothPrimeSet build_Q(const SieveParams& params, const SieveOptions& opts) {
    check_params(params);
    uint64_t lo = sieve_lower_bound(params);
    uint64_t hi = sieve_upper_bound(params);
    SmoothPrimeSet out{params, {}};
    if (lo > hi)
        return out;
    if (hi > opts.interval_cap)
        throw DomainError("sieve: interval upper bound " + std::to_string(hi) +
                          " exceeds cap " + std::to_string(opts.interval_cap));

    auto small_primes = sieve_primes(params.y);

    // Sieve the interval [lo, hi] for primes, then keep those q with q-1
    // fully divisible away by primes <= y.
    std::vector<bool> composite(hi - lo + 1, false);
    uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
    auto base = sieve_primes(root);
    for (uint64_t p : base) {
        uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
        for (uint64_t m = start; m <= hi; m += p)
            composite[m - lo] = true;
    }
    for (uint64_t q = std::max<uint64_t>(lo, 2); q <= hi; ++q) {
        if (composite[q - lo])
            continue;
        uint64_t shifted = q - 1;
        for (uint32_t p : small_primes)
            while (shifted % p == 0)
                shifted /= p;
        if (shifted == 1)
            out.primes.emplace_back(static_cast<unsigned long>(q));
    }
    return out;
}

double density_report(const SmoothPrimeSet& q) {
    if (q.primes.empty())
        return 0.0;
    double yt = std::pow(static_cast<double>(q.params.y), q.params.theta);
    double denom = yt / std::log(yt);
    return static_cast<double>(q.primes.size()) / denom;
}

} // namespace carmkit
