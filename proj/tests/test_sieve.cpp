#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "carmkit/sieve.hpp"
#include "oracles.hpp"

using namespace carmkit;

namespace {

// Exhaustive reconstruction of Q by trial division only.
std::vector<uint64_t> q_oracle(uint64_t y, double theta) {
    long double yt = std::pow(static_cast<long double>(y), static_cast<long double>(theta));
    uint64_t lo = static_cast<uint64_t>(std::ceil(yt / std::log(static_cast<long double>(y))));
    uint64_t hi = static_cast<uint64_t>(std::floor(yt));
    std::vector<uint64_t> out;
    for (uint64_t q = lo; q <= hi; ++q)
        if (oracles::is_prime_td(q) && oracles::largest_prime_factor_td(q - 1) <= y)
            out.push_back(q);
    return out;
}

} // namespace

TEST_CASE("build_Q(10, 1.5) is exactly {17, 19, 29, 31}") {
    auto q = build_Q({10, 1.5});
    REQUIRE(q.primes.size() == 4);
    CHECK(q.primes[0] == 17);
    CHECK(q.primes[1] == 19);
    CHECK(q.primes[2] == 29);
    CHECK(q.primes[3] == 31); // 23 is out: 22 = 2 * 11 and 11 > 10
}

TEST_CASE("empty qualifying interval yields the empty set") {
    auto q = build_Q({3, 1.1});
    CHECK(q.primes.empty());
    CHECK(density_report(q) == 0.0);
}

TEST_CASE("build_Q matches the trial-division oracle for y <= 30") {
    for (uint64_t y : {3, 5, 10, 15, 20, 25, 30}) {
        for (double theta : {1.2, 1.5, 1.8}) {
            auto got = build_Q({y, theta});
            auto want = q_oracle(y, theta);
            REQUIRE(got.primes.size() == want.size());
            for (size_t i = 0; i < want.size(); ++i)
                CHECK(got.primes[i] == want[i]);
        }
    }
}

TEST_CASE("membership soundness and completeness over the interval") {
    SieveParams params{20, 1.5};
    auto q = build_Q(params);
    uint64_t lo = sieve_lower_bound(params), hi = sieve_upper_bound(params);
    size_t idx = 0;
    for (uint64_t m = lo; m <= hi; ++m) {
        bool should = oracles::is_prime_td(m) && oracles::largest_prime_factor_td(m - 1) <= 20;
        bool in_set = idx < q.primes.size() && q.primes[idx] == m;
        CHECK(should == in_set);
        if (in_set)
            ++idx;
    }
    CHECK(idx == q.primes.size());
}

TEST_CASE("growing y keeps primes that stay inside the new interval and bound") {
    auto small = build_Q({10, 1.5});
    auto large = build_Q({14, 1.5});
    uint64_t lo = sieve_lower_bound({14, 1.5}), hi = sieve_upper_bound({14, 1.5});
    for (const auto& p : small.primes) {
        if (p >= lo && p <= hi) {
            CHECK(std::find(large.primes.begin(), large.primes.end(), p) != large.primes.end());
        }
    }
}

TEST_CASE("density ratio of the y=10 set") {
    auto q = build_Q({10, 1.5});
    double yt = std::pow(10.0, 1.5);
    CHECK(density_report(q) == doctest::Approx(4.0 / (yt / std::log(yt))).epsilon(1e-9));
    CHECK(density_report(q) == doctest::Approx(0.437).epsilon(0.01));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(build_Q({2, 1.5}), DomainError);
    CHECK_THROWS_AS(build_Q({10, 1.0}), DomainError);
    CHECK_THROWS_AS(build_Q({10, 2.0}), DomainError);
    CHECK_THROWS_AS(build_Q({1'000'000, 1.9}, {.interval_cap = 1'000'000}), DomainError);
}
