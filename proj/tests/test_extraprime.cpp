#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "carmkit/extraprime.hpp"
#include "oracles.hpp"

using namespace carmkit;

TEST_CASE("find_k1 examples") {
    auto ep35 = find_k1_for_base(35);
    CHECK(ep35.k1 == 2); // 36 composite, 71 prime
    CHECK(ep35.p == 71);

    auto ep2 = find_k1_for_base(2);
    CHECK(ep2.k1 == 1);
    CHECK(ep2.p == 3);

    // direct scan oracle for base 290377
    Natural base = 290377;
    uint64_t want_k1 = 0;
    for (uint64_t k = 1;; ++k) {
        if (oracles::is_prime_td(290377ull * k + 1)) {
            want_k1 = k;
            break;
        }
    }
    auto ep = find_k1_for_base(base);
    CHECK(ep.k1 == want_k1);
    CHECK(ep.p == base * want_k1 + 1);
}

TEST_CASE("find_k1 minimality on random moduli") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        uint64_t base = 2 + rng() % 99'998;
        auto ep = find_k1_for_base(base);
        for (Natural k = 1; k < ep.k1; ++k)
            CHECK_FALSE(is_prime(Natural(base) * k + 1));
        CHECK(is_prime(ep.p));
    }
}

TEST_CASE("P is 1 mod every divisor of the base") {
    auto l = make_modulus({Natural(17), Natural(19)});
    auto ep = find_k1(l, 4);
    CHECK(ep.modulus_base == 323 * 4);
    for (uint64_t d : {2, 4, 17, 19, 68, 323, 1292})
        CHECK(ep.p % d == 1);
}

TEST_CASE("find_k1 fails loudly when the range is too small") {
    CHECK_THROWS_AS(find_k1_for_base(35, 1), BudgetExceeded); // 36 = 6^2
    CHECK_THROWS_AS(find_k1_for_base(1), DomainError);
}

TEST_CASE("hb_ratio records (P-1) / (base ln^2 base)") {
    auto ep = find_k1_for_base(35);
    double expect = 70.0 / (35.0 * std::log(35.0) * std::log(35.0));
    CHECK(ep.hb_ratio == doctest::Approx(expect).epsilon(1e-12));
    CHECK(ep.hb_ratio == doctest::Approx(0.158).epsilon(0.02));
}

TEST_CASE("heathbrown_gauge small cases") {
    auto rep = heathbrown_gauge(40);
    // d = 2: least prime = 1 mod 2 is 3
    REQUIRE(rep.table.front().d == 2);
    CHECK(rep.table.front().least_prime == 3);
    for (const auto& row : rep.table) {
        if (row.d == 35) {
            CHECK(row.least_prime == 71);
            CHECK(row.ratio == doctest::Approx(0.160).epsilon(0.02));
        }
    }
}

TEST_CASE("heathbrown_gauge agrees with a direct scan oracle") {
    auto rep = heathbrown_gauge(500);
    for (const auto& row : rep.table) {
        uint64_t p = 1;
        while (!oracles::is_prime_td(p) || p % row.d != 1)
            ++p;
        CHECK(row.least_prime == p);
    }
    CHECK(rep.max_ratio > 0.0);
    CHECK(rep.argmax_d >= 3);
}

TEST_CASE("gauge respects the coprimality convention") {
    auto rep = heathbrown_gauge(30, 6);
    for (const auto& row : rep.table) {
        CHECK(std::gcd(row.d, 6ull) == 1);
        CHECK(row.least_prime % row.d == 6 % row.d);
    }
}
