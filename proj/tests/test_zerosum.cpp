#include <doctest.h>

#include <set>

#include "carmkit/zerosum.hpp"
#include "oracles.hpp"

using namespace carmkit;

namespace {

HarvestedPrimes pool120() {
    HarvestedPrimes pool;
    pool.k = 1;
    pool.x_bound = 0;
    for (uint64_t p : {7, 11, 13, 31, 41, 61})
        pool.entries.push_back({Natural(static_cast<unsigned long>(p)), Natural(static_cast<unsigned long>(p - 1))});
    return pool;
}

} // namespace

TEST_CASE("Davenport constant of cyclic groups equals the order") {
    for (uint64_t m = 1; m <= 12; ++m)
        CHECK(davenport_bruteforce({{m}}) == m);
    // cross-check the brute force against the literal definition for tiny m
    for (uint64_t m = 1; m <= 6; ++m)
        CHECK(davenport_bruteforce({{m}}) == oracles::davenport_definition_cyclic(m));
}

TEST_CASE("Davenport constants of small products") {
    CHECK(davenport_bruteforce({{}}) == 1);        // trivial group
    CHECK(davenport_bruteforce({{1}}) == 1);
    CHECK(davenport_bruteforce({{2, 2}}) == 3);
    CHECK(davenport_bruteforce({{2, 4}}) == 5);    // n(Z2 x Z4) = 2 + 4 - 1
    CHECK(davenport_bruteforce({{3, 3}}) == 5);
    CHECK(davenport_bruteforce({{2, 2, 2}}) == 4);
    CHECK_THROWS_AS(davenport_bruteforce({{100}}), DomainError);
}

TEST_CASE("EK-Meshulam bound") {
    CHECK(davenport_bound(1, 1) == 1);
    CHECK(davenport_bound(4, 8) == 7); // ceil(4 + ln 8) = ceil(6.079)
    // brute force never exceeds the bound
    std::vector<GroupSpec> groups = {{{2}}, {{3}}, {{5}}, {{8}}, {{12}},
                                     {{2, 2}}, {{2, 4}}, {{3, 3}}, {{2, 2, 2}}, {{2, 3}}};
    for (const auto& g : groups) {
        Natural bound = davenport_bound(g.exponent(), g.order());
        CHECK(Natural(davenport_bruteforce(g)) <= bound);
    }
}

TEST_CASE("AGP subsequence count bound, Z3") {
    auto rep = agp_count_check({{3}}, 9, 4, 200, /*seed=*/1);
    CHECK(rep.n == 3);
    CHECK(rep.bound == doctest::Approx(1.5)); // C(9,4)/C(9,3) = 126/84
    CHECK(rep.min_observed >= 2);             // integrality
    CHECK(rep.violations == 0);
}

TEST_CASE("AGP subsequence count bound, Z5") {
    auto rep = agp_count_check({{5}}, 12, 6, 200, /*seed=*/2);
    CHECK(rep.n == 5);
    CHECK(rep.violations == 0);
}

TEST_CASE("AGP over the trivial group counts every admissible subsequence") {
    // every element is the identity, so the count is exactly C(9,3) + C(9,4)
    auto rep = agp_count_check({{1}}, 9, 4, 3, /*seed=*/7);
    CHECK(rep.n == 1);
    CHECK(rep.min_observed == 84 + 126);
    CHECK(rep.violations == 0);
}

TEST_CASE("AGP precondition enforcement") {
    CHECK_THROWS_AS(agp_count_check({{3}}, 4, 3, 1, 1), DomainError);  // t = n
    CHECK_THROWS_AS(agp_count_check({{3}}, 4, 4, 1, 1), DomainError);  // r = t
    CHECK_THROWS_AS(agp_count_check({{3}}, 30, 4, 1, 1), DomainError); // r too big
}

TEST_CASE("zero-sum families over the 120 pool") {
    auto pool = pool120();
    auto fams = find_zero_sum_sets(pool, 120, 1, 4, 100, false);

    // h=4 must contain {7, 11, 13, 41}: 41041 = 1 mod 120
    bool found = false;
    for (const auto& s : fams.at(4).sets) {
        if (s == std::vector<Natural>{7, 11, 13, 41})
            found = true;
        // independent re-multiplication
        std::vector<mpz_class> xs(s.begin(), s.end());
        CHECK(oracles::product_mod(xs, 120) == 1);
        CHECK(s.size() == 4);
    }
    CHECK(found);

    // h=1: only primes that are themselves 1 mod M; none here
    CHECK(fams.at(1).sets.empty());
}

TEST_CASE("meet-in-the-middle agrees with exhaustive search") {
    auto pool = pool120();
    ZeroSumOptions exhaustive_opts;
    exhaustive_opts.exhaustive_threshold = 1u << 21;
    ZeroSumOptions mitm_opts;
    mitm_opts.exhaustive_threshold = 10; // below C(6,h), so MITM handles every h

    for (uint64_t h = 2; h <= 5; ++h) {
        auto ex = find_zero_sum_sets(pool, 120, h, h, 1000, false, exhaustive_opts);
        auto mm = find_zero_sum_sets(pool, 120, h, h, 1000, false, mitm_opts);
        auto norm = [](std::vector<std::vector<Natural>> v) {
            for (auto& s : v)
                std::sort(s.begin(), s.end());
            std::sort(v.begin(), v.end());
            return v;
        };
        CHECK(norm(ex.at(h).sets) == norm(mm.at(h).sets));
    }
}

TEST_CASE("disjoint extraction produces pairwise-disjoint sets") {
    auto pool = pool120();
    auto fams = find_zero_sum_sets(pool, 120, 2, 4, 100, true);
    for (const auto& [h, fam] : fams) {
        std::set<Natural> seen;
        for (const auto& s : fam.sets)
            for (const auto& p : s) {
                CHECK_FALSE(seen.count(p));
                seen.insert(p);
            }
        CHECK(fam.disjoint_count == fam.sets.size());
    }
}

TEST_CASE("select_h") {
    std::map<uint64_t, ZeroSumFamily> fams;
    ZeroSumFamily f3;
    f3.h = 3;
    f3.sets.resize(5);
    ZeroSumFamily f4;
    f4.h = 4;
    f4.sets.resize(9);
    fams[3] = f3;
    fams[4] = f4;

    CHECK(select_h(fams, 3).h == 4); // window [3,6], argmax
    CHECK_FALSE(select_h(fams, 3).window_fallback);

    // window [10, 20] empty: falls back to the full range with a flag
    auto fb = select_h(fams, 10);
    CHECK(fb.h == 4);
    CHECK(fb.window_fallback);

    // single nonempty family
    std::map<uint64_t, ZeroSumFamily> single;
    single[2] = f3;
    CHECK(select_h(single, 1).h == 2);

    // ties break to the smaller h
    fams[5] = f4;
    fams[5].h = 5;
    CHECK(select_h(fams, 3).h == 4);

    std::map<uint64_t, ZeroSumFamily> empty_fams;
    ZeroSumFamily e;
    e.h = 2;
    empty_fams[2] = e;
    CHECK_THROWS_AS(select_h(empty_fams, 1), BudgetExceeded);
    CHECK_THROWS_AS(select_h({}, 1), DomainError);
}

TEST_CASE("find_zero_sum_sets validates inputs") {
    auto pool = pool120();
    CHECK_THROWS_AS(find_zero_sum_sets(pool, 120, 1, 7, 10, false), DomainError); // h_max > |pool|
    CHECK_THROWS_AS(find_zero_sum_sets(pool, 1, 1, 2, 10, false), DomainError);
    HarvestedPrimes empty;
    CHECK_THROWS_AS(find_zero_sum_sets(empty, 120, 1, 1, 10, false), DomainError);
}
