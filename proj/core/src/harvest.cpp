#include "carmkit/harvest.hpp"

#include <algorithm>
#include <map>

namespace carmkit {

namespace {

void extend(const std::vector<Natural>& primes, size_t idx, const Natural& product,
            const Natural& cap, std::vector<Natural>& out, uint64_t limit) {
    if (out.size() > limit)
        throw DomainError("enumerate_divisors: divisor count exceeds limit " + std::to_string(limit));
    out.push_back(product);
    for (size_t i = idx; i < primes.size(); ++i) {
        Natural next = product * primes[i];
        if (next > cap)
            break; // primes increase, so every later product overshoots too
        extend(primes, i + 1, next, cap, out, limit);
    }
}

void extend_powers(const std::vector<PrimeFactor>& factors, size_t idx, const Natural& product,
                   const Natural& cap, std::vector<Natural>& out, uint64_t limit) {
    if (idx == factors.size()) {
        if (out.size() >= limit)
            throw DomainError("enumerate_divisors: divisor count exceeds limit " +
                              std::to_string(limit));
        out.push_back(product);
        return;
    }
    Natural current = product;
    for (unsigned e = 0; e <= factors[idx].exponent; ++e) {
        if (current > cap)
            break;
        extend_powers(factors, idx + 1, current, cap, out, limit);
        current *= factors[idx].prime;
    }
}

} // namespace

std::vector<Natural> enumerate_divisors(const Modulus& l, const Natural& cap,
                                        const DivisorOptions& opts) {
    if (cap < 1)
        throw DomainError("enumerate_divisors: cap must be >= 1");
    std::vector<Natural> out;
    extend(l.prime_factors, 0, 1, cap, out, opts.max_divisors);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Natural> enumerate_divisors(const Factorization& f, const Natural& cap,
                                        const DivisorOptions& opts) {
    if (cap < 1)
        throw DomainError("enumerate_divisors: cap must be >= 1");
    std::vector<Natural> out;
    extend_powers(f.factors, 0, 1, cap, out, opts.max_divisors);
    std::sort(out.begin(), out.end());
    return out;
}

HarvestedPrimes harvest_from_divisors(const std::vector<Natural>& divisors, const Natural& k,
                                      const Natural& x_bound) {
    if (k < 1)
        throw DomainError("harvest: k must be >= 1");
    HarvestedPrimes pool{k, {}, x_bound};
    std::map<Natural, Natural> seen; // p -> smallest witness d
    for (const auto& d : divisors) {
        Natural p = d * k + 1;
        if (x_bound != 0 && p > x_bound)
            continue;
        if (!seen.count(p) && is_prime(p))
            seen.emplace(p, d);
    }
    for (auto& [p, d] : seen)
        pool.entries.push_back({p, d});
    return pool;
}

HarvestedPrimes harvest_P_k(const Modulus& l, const Natural& k, const Natural& cap,
                            const Natural& x_bound, const DivisorOptions& opts) {
    return harvest_from_divisors(enumerate_divisors(l, cap, opts), k, x_bound);
}

K0Selection select_k0_from_divisors(const std::vector<Natural>& divisors, const Natural& k_min,
                                    const Natural& k_max, const Natural& x_bound) {
    if (k_min < 1 || k_max < k_min)
        throw DomainError("select_k0: need 1 <= k_min <= k_max");
    K0Selection sel;
    bool any = false;
    for (Natural k = k_min; k <= k_max; ++k) {
        auto pool = harvest_from_divisors(divisors, k, x_bound);
        sel.scan.push_back({k, pool.entries.size()});
        if (!any || pool.entries.size() > sel.pool.entries.size()) {
            any = true;
            sel.k0 = k;
            sel.pool = std::move(pool);
        }
    }
    if (!any || sel.pool.entries.empty())
        throw BudgetExceeded("select_k0: no viable k in [" + k_min.get_str() + ", " +
                             k_max.get_str() + "] (all pools empty)");
    return sel;
}

K0Selection select_k0(const Modulus& l, const Natural& k_min, const Natural& k_max,
                      const Natural& cap, const Natural& x_bound, const DivisorOptions& opts) {
    return select_k0_from_divisors(enumerate_divisors(l, cap, opts), k_min, k_max, x_bound);
}

} // namespace carmkit
