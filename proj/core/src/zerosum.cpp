#include "carmkit/zerosum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include <mpfr.h>

namespace carmkit {

uint64_t GroupSpec::order() const {
    uint64_t o = 1;
    for (uint64_t m : cyclic_orders)
        o *= m;
    return o;
}

uint64_t GroupSpec::exponent() const {
    uint64_t e = 1;
    for (uint64_t m : cyclic_orders)
        e = std::lcm(e, m);
    return e;
}

namespace {

// Elements of a small direct product group as mixed-radix indices.
std::vector<std::vector<uint8_t>> addition_table(const GroupSpec& g) {
    uint64_t n = g.order();
    std::vector<std::vector<uint8_t>> add(n, std::vector<uint8_t>(n));
    auto decode = [&](uint64_t x) {
        std::vector<uint64_t> digits(g.cyclic_orders.size());
        for (size_t i = 0; i < g.cyclic_orders.size(); ++i) {
            digits[i] = x % g.cyclic_orders[i];
            x /= g.cyclic_orders[i];
        }
        return digits;
    };
    auto encode = [&](const std::vector<uint64_t>& digits) {
        uint64_t x = 0;
        for (size_t i = g.cyclic_orders.size(); i-- > 0;)
            x = x * g.cyclic_orders[i] + digits[i];
        return x;
    };
    for (uint64_t a = 0; a < n; ++a) {
        auto da = decode(a);
        for (uint64_t b = 0; b < n; ++b) {
            auto db = decode(b);
            std::vector<uint64_t> dc(da.size());
            for (size_t i = 0; i < da.size(); ++i)
                dc[i] = (da[i] + db[i]) % g.cyclic_orders[i];
            add[a][b] = static_cast<uint8_t>(encode(dc));
        }
    }
    return add;
}

// Longest zero-sum-free multiset, by DFS over nondecreasing element choices.
// mask bit s = some nonempty sub-multiset sums to s; bit 0 means a zero-sum
// exists, which prunes the branch.
void zsf_dfs(const std::vector<std::vector<uint8_t>>& add, uint64_t n_elems,
             uint64_t start, uint64_t mask, uint64_t depth, uint64_t& best) {
    best = std::max(best, depth);
    for (uint64_t e = start; e < n_elems; ++e) {
        uint64_t next = mask | (1ull << e);
        for (uint64_t s = 0; s < n_elems; ++s)
            if (mask & (1ull << s))
                next |= 1ull << add[s][e];
        if (next & 1ull)
            continue;
        zsf_dfs(add, n_elems, e, next, depth + 1, best);
    }
}

} // namespace

uint64_t davenport_bruteforce(const GroupSpec& g, const BruteForceOptions& opts) {
    uint64_t n = g.order();
    if (n == 0)
        throw DomainError("davenport_bruteforce: zero group order");
    if (n > opts.order_limit)
        throw DomainError("davenport_bruteforce: |G| = " + std::to_string(n) + " exceeds limit " +
                          std::to_string(opts.order_limit) + "; use davenport_bound instead");
    if (n == 1)
        return 1;
    auto add = addition_table(g);
    uint64_t best = 0;
    zsf_dfs(add, n, 1, 0, 0, best); // element 0 is the identity; never zero-sum-free
    return best + 1;
}

Natural davenport_bound(const Natural& lambda_g, const Natural& order_g) {
    if (lambda_g < 1 || order_g < 1)
        throw DomainError("davenport_bound: lambda and |G| must be >= 1");
    if (order_g == 1)
        return 1;
    // ceil(lambda + ln|G|); ln|G| is irrational for |G| >= 2, so a 256-bit
    // evaluation decides the ceiling.
    mpfr_t t;
    mpfr_init2(t, 256);
    mpfr_set_z(t, order_g.get_mpz_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    mpfr_ceil(t, t);
    unsigned long c = mpfr_get_ui(t, MPFR_RNDN);
    mpfr_clear(t);
    return lambda_g + c;
}

AgpCheckReport agp_count_check(const GroupSpec& g, uint64_t r, uint64_t t, uint64_t trials,
                               uint64_t seed) {
    if (r > 24)
        throw DomainError("agp_count_check: r too large for exhaustive counting");
    AgpCheckReport rep;
    rep.n = davenport_bruteforce(g);
    rep.r = r;
    rep.t = t;
    rep.trials = trials;
    if (!(r > t && t > rep.n))
        throw DomainError("agp_count_check: need r > t > n(G); got r=" + std::to_string(r) +
                          " t=" + std::to_string(t) + " n=" + std::to_string(rep.n));

    Natural num, den;
    mpz_bin_uiui(num.get_mpz_t(), r, t);
    mpz_bin_uiui(den.get_mpz_t(), r, rep.n);
    rep.bound = mpz_get_d(num.get_mpz_t()) / mpz_get_d(den.get_mpz_t());

    auto add = addition_table(g);
    uint64_t order = g.order();
    std::mt19937_64 rng(seed);
    rep.min_observed = UINT64_MAX;

    std::vector<uint8_t> elem(r);
    std::vector<uint8_t> subset_sum(1ull << r);
    for (uint64_t trial = 0; trial < trials; ++trial) {
        for (uint64_t i = 0; i < r; ++i)
            elem[i] = static_cast<uint8_t>(rng() % order);
        uint64_t count = 0;
        subset_sum[0] = 0;
        for (uint64_t mask = 1; mask < (1ull << r); ++mask) {
            uint64_t low = mask & (~mask + 1);
            uint64_t idx = static_cast<uint64_t>(std::countr_zero(low));
            subset_sum[mask] = add[subset_sum[mask ^ low]][elem[idx]];
            if (subset_sum[mask] == 0) {
                int len = std::popcount(mask);
                if (len >= static_cast<int>(t - rep.n) && len <= static_cast<int>(t))
                    ++count;
            }
        }
        rep.min_observed = std::min(rep.min_observed, count);
        if (static_cast<double>(count) < rep.bound)
            ++rep.violations;
    }
    if (trials == 0)
        rep.min_observed = 0;
    return rep;
}

namespace {

using IndexSet = std::vector<uint32_t>;

bool next_combination(IndexSet& c, uint32_t n) {
    uint32_t k = static_cast<uint32_t>(c.size());
    for (uint32_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (uint32_t j = i + 1; j < k; ++j)
                c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

Natural product_mod(const std::vector<Natural>& primes, const IndexSet& idx, const Natural& m) {
    Natural prod = 1;
    for (uint32_t i : idx)
        prod = (prod * primes[i]) % m;
    return prod;
}

} // namespace

std::map<uint64_t, ZeroSumFamily> find_zero_sum_sets(const HarvestedPrimes& pool,
                                                     const Natural& m, uint64_t h_min,
                                                     uint64_t h_max, uint64_t target_count,
                                                     bool disjoint, const ZeroSumOptions& opts) {
    if (pool.entries.empty())
        throw DomainError("find_zero_sum_sets: empty pool");
    uint32_t n = static_cast<uint32_t>(pool.entries.size());
    if (h_min < 1 || h_max < h_min || h_max > n)
        throw DomainError("find_zero_sum_sets: need 1 <= h_min <= h_max <= |pool|");
    if (m < 2)
        throw DomainError("find_zero_sum_sets: modulus must be >= 2");
    if (target_count == 0)
        target_count = opts.target_count;

    std::vector<Natural> primes;
    primes.reserve(n);
    for (const auto& e : pool.entries)
        primes.push_back(e.p);

    std::map<uint64_t, ZeroSumFamily> out;
    for (uint64_t h = h_min; h <= h_max; ++h) {
        ZeroSumFamily fam;
        fam.modulus = m;
        fam.h = h;

        Natural total;
        mpz_bin_uiui(total.get_mpz_t(), n, h);
        auto emit = [&](const IndexSet& idx) {
            std::vector<Natural> set;
            set.reserve(idx.size());
            for (uint32_t i : idx)
                set.push_back(primes[i]);
            fam.sets.push_back(std::move(set));
        };

        if (total <= static_cast<unsigned long>(opts.exhaustive_threshold)) {
            IndexSet c(h);
            std::iota(c.begin(), c.end(), 0u);
            do {
                if (product_mod(primes, c, m) == 1) {
                    emit(c);
                    if (fam.sets.size() >= target_count)
                        break;
                }
            } while (next_combination(c, n));
        } else {
            // Meet in the middle: index half-products of the back half by
            // residue, then probe with modular inverses of front products.
            uint32_t half = n / 2;
            std::vector<uint32_t> front(half), back(n - half);
            std::iota(front.begin(), front.end(), 0u);
            std::iota(back.begin(), back.end(), half);

            uint64_t a_lo = h > back.size() ? h - back.size() : 0;
            uint64_t a_hi = std::min<uint64_t>(h, front.size());
            for (uint64_t a = a_lo; a <= a_hi && fam.sets.size() < target_count; ++a) {
                uint64_t b = h - a;
                Natural back_count;
                mpz_bin_uiui(back_count.get_mpz_t(), static_cast<unsigned long>(back.size()),
                             static_cast<unsigned long>(b));
                if (back_count > static_cast<unsigned long>(opts.exhaustive_threshold))
                    continue; // this split size alone is past budget

                std::map<Natural, std::vector<IndexSet>> by_residue;
                if (b == 0) {
                    by_residue[1 % m].push_back({});
                } else {
                    IndexSet c(b);
                    std::iota(c.begin(), c.end(), 0u);
                    do {
                        IndexSet real(b);
                        for (uint32_t i = 0; i < b; ++i)
                            real[i] = back[c[i]];
                        by_residue[product_mod(primes, real, m)].push_back(real);
                    } while (next_combination(c, static_cast<uint32_t>(back.size())));
                }

                auto probe = [&](const IndexSet& front_idx) {
                    Natural pa = product_mod(primes, front_idx, m);
                    Natural inv;
                    if (mpz_invert(inv.get_mpz_t(), pa.get_mpz_t(), m.get_mpz_t()) == 0)
                        return;
                    auto it = by_residue.find(inv);
                    if (it == by_residue.end())
                        return;
                    for (const auto& back_idx : it->second) {
                        IndexSet full = front_idx;
                        full.insert(full.end(), back_idx.begin(), back_idx.end());
                        emit(full);
                        if (fam.sets.size() >= target_count)
                            return;
                    }
                };

                if (a == 0) {
                    probe({});
                } else {
                    IndexSet c(a);
                    std::iota(c.begin(), c.end(), 0u);
                    do {
                        probe(c);
                    } while (fam.sets.size() < target_count &&
                             next_combination(c, static_cast<uint32_t>(front.size())));
                }
            }
        }

        if (disjoint) {
            std::vector<std::vector<Natural>> kept;
            std::set<Natural> used;
            for (const auto& s : fam.sets) {
                bool clash = std::any_of(s.begin(), s.end(),
                                         [&](const Natural& p) { return used.count(p) > 0; });
                if (clash)
                    continue;
                used.insert(s.begin(), s.end());
                kept.push_back(s);
            }
            fam.sets = std::move(kept);
            fam.disjoint_count = fam.sets.size();
        }
        out.emplace(h, std::move(fam));
    }
    return out;
}

HSelection select_h(const std::map<uint64_t, ZeroSumFamily>& families, uint64_t n_bound) {
    if (families.empty())
        throw DomainError("select_h: no families given");
    auto pick = [&](uint64_t lo, uint64_t hi) -> std::optional<uint64_t> {
        std::optional<uint64_t> best;
        size_t best_size = 0;
        for (const auto& [h, fam] : families) {
            if (h < lo || h > hi || fam.sets.empty())
                continue;
            if (!best || fam.sets.size() > best_size) {
                best = h;
                best_size = fam.sets.size();
            }
        }
        return best;
    };
    if (auto h = pick(n_bound, 2 * n_bound))
        return {*h, false};
    if (auto h = pick(0, UINT64_MAX))
        return {*h, true};
    throw BudgetExceeded("select_h: every family is empty");
}

} // namespace carmkit
