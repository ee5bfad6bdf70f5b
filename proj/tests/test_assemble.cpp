#include <doctest.h>

#include <set>

#include "carmkit/assemble.hpp"
#include "oracles.hpp"

using namespace carmkit;

TEST_CASE("verify_korselt accepts genuine Carmichael factorizations") {
    auto r561 = verify_korselt({3, 11, 17});
    CHECK(r561.ok);
    CHECK(r561.n == 561);
    REQUIRE(r561.witnesses.size() == 3);
    CHECK(r561.witnesses[0] == 280);
    CHECK(r561.witnesses[1] == 56);
    CHECK(r561.witnesses[2] == 35);

    auto r1729 = verify_korselt({7, 13, 19});
    CHECK(r1729.ok);
    CHECK(r1729.n == 1729);

    auto big = verify_korselt({7, 11, 13, 41});
    CHECK(big.ok);
    CHECK(big.n == 41041);
}

TEST_CASE("verify_korselt rejects non-Carmichael inputs with a reason") {
    CHECK_THROWS_AS(verify_korselt({Natural(561)}), DomainError);

    auto two = verify_korselt({3, 5});
    CHECK_FALSE(two.ok);
    CHECK(two.failure.find("at least 3") != std::string::npos);

    auto rep = verify_korselt({3, 3, 5});
    CHECK_FALSE(rep.ok);
    CHECK(rep.failure.find("repeated") != std::string::npos);

    auto comp = verify_korselt({3, 4, 5});
    CHECK_FALSE(comp.ok);
    CHECK(comp.failure.find("not prime") != std::string::npos);

    auto even = verify_korselt({2, 3, 5});
    CHECK_FALSE(even.ok);
    CHECK(even.failure.find("even") != std::string::npos);

    auto div = verify_korselt({3, 5, 7}); // 104 = 2 mod 6
    CHECK_FALSE(div.ok);
    CHECK(div.failure.find("divide") != std::string::npos);
}

TEST_CASE("find_g0 for the prime class scans for g*h + 1 prime") {
    CHECK(find_g0(2, CountClass::prime, 100) == 1);  // 3
    CHECK(find_g0(4, CountClass::prime, 100) == 1);  // 5
    CHECK(find_g0(7, CountClass::prime, 100) == 4);  // 8, 15, 22 composite; 29 prime
    CHECK_THROWS_AS(find_g0(7, CountClass::prime, 3), BudgetExceeded);
    CHECK_THROWS_AS(find_g0(0, CountClass::prime, 3), DomainError);
}

TEST_CASE("find_g0 for power classes takes the minimal complement") {
    CHECK(find_g0(3, CountClass::perfect_square, 100) == 3);  // 9
    CHECK(find_g0(4, CountClass::perfect_square, 100) == 1);  // already 2^2
    CHECK(find_g0(12, CountClass::perfect_square, 100) == 3); // 36
    CHECK(find_g0(3, CountClass::perfect_cube, 100) == 9);    // 27
    CHECK(find_g0(8, CountClass::perfect_cube, 100) == 1);
    CHECK(find_g0(8, CountClass::perfect_power, 100, 4) == 2); // 16 = 2^4
    CHECK(find_g0(1, CountClass::perfect_square, 100) == 1);
    CHECK(find_g0(5, CountClass::none, 100) == 1);
}

TEST_CASE("assemble_carmichael builds 41041 from one zero-sum set") {
    auto cert = assemble_carmichael({{7, 11, 13, 41}}, std::nullopt, 120);
    CHECK(cert.n == 41041);
    CHECK(cert.factor_count == 4);
    CHECK(cert.count_class == CountClass::perfect_square);
    CHECK(cert.g == 1);
    CHECK(cert.h == 4);
    CHECK_FALSE(cert.includes_extra_prime);
    REQUIRE(cert.korselt_witnesses.size() == 4);
    CHECK(cert.korselt_witnesses[0] == 41040 / 6);

    // independent product check
    std::vector<mpz_class> xs(cert.factors.begin(), cert.factors.end());
    CHECK(oracles::product_mod(xs, 120) == 1);
}

TEST_CASE("assemble_carmichael with an extra prime") {
    ExtraPrime extra;
    extra.k1 = 2;
    extra.p = 241;
    extra.modulus_base = 60;
    auto cert = assemble_carmichael({{7, 11, 13, 41}}, extra, 120);
    CHECK(cert.n == Natural(41041) * 241); // 9890881
    CHECK(cert.factor_count == 5);
    CHECK(cert.count_class == CountClass::prime);
    CHECK(cert.includes_extra_prime);
    CHECK(cert.factors.back() == 241);
}

TEST_CASE("assemble_carmichael rejects malformed inputs") {
    // overlapping sets
    CHECK_THROWS_AS(assemble_carmichael({{7, 11, 13, 41}, {7, 17, 23, 29}}, std::nullopt, 120),
                    DomainError);
    // product is not 1 mod M
    CHECK_THROWS_AS(assemble_carmichael({{7, 11}}, std::nullopt, 120), DomainError);
    // (p-1) does not divide M
    CHECK_THROWS_AS(assemble_carmichael({{7, 11, 13, 41}}, std::nullopt, 60), DomainError);
    // too few factors overall
    CHECK_THROWS_AS(assemble_carmichael({{Natural(7)}}, std::nullopt, 6), DomainError);

    ExtraPrime clash;
    clash.k1 = 1;
    clash.p = 7;
    clash.modulus_base = 6;
    CHECK_THROWS_AS(assemble_carmichael({{7, 11, 13, 41}}, clash, 120), DomainError);

    ExtraPrime mismatch;
    mismatch.k1 = 2;
    mismatch.p = 13;
    mismatch.modulus_base = 5; // 5 * 2 != 120
    CHECK_THROWS_AS(assemble_carmichael({{7, 11, 13, 41}}, mismatch, 120), DomainError);
}

TEST_CASE("chernick_search") {
    auto certs = chernick_search(60);
    REQUIRE_FALSE(certs.empty());
    CHECK(certs.front().n == 1729); // k = 1: 7 * 13 * 19
    CHECK(certs.front().h == 3);
    CHECK(certs.front().count_class == CountClass::prime);

    // oracle: recompute which k qualify by trial-division primality
    std::set<Natural> found;
    for (const auto& c : certs)
        found.insert(c.n);
    for (uint64_t k = 1; k <= 60; ++k) {
        uint64_t a = 6 * k + 1, b = 12 * k + 1, c = 18 * k + 1;
        bool qual = oracles::is_prime_td(a) && oracles::is_prime_td(b) && oracles::is_prime_td(c);
        Natural n = Natural(static_cast<unsigned long>(a)) * b * c;
        CHECK(qual == (found.count(n) > 0));
    }
    // k = 2 drops out: 25 = 12*2+1 is composite
    CHECK_FALSE(found.count(Natural(13) * 25 * 37));

    CHECK_THROWS_AS(chernick_search(0), DomainError);
}

TEST_CASE("classify_factor_count") {
    for (uint64_t c : {2, 3, 5, 7, 11, 13})
        CHECK(classify_factor_count(c) == CountClass::prime);
    for (uint64_t c : {4, 9, 16, 25, 36})
        CHECK(classify_factor_count(c) == CountClass::perfect_square);
    for (uint64_t c : {8, 27})
        CHECK(classify_factor_count(c) == CountClass::perfect_cube);
    CHECK(classify_factor_count(32) == CountClass::perfect_power);
    for (uint64_t c : {1, 6, 10, 12, 15})
        CHECK(classify_factor_count(c) == CountClass::none);
}

TEST_CASE("count class names round-trip") {
    for (CountClass c : {CountClass::prime, CountClass::perfect_square, CountClass::perfect_cube,
                         CountClass::perfect_power, CountClass::none})
        CHECK(count_class_from_string(to_string(c)) == c);
    CHECK(count_class_from_string("square") == CountClass::perfect_square);
    CHECK(count_class_from_string("cube") == CountClass::perfect_cube);
    CHECK(count_class_from_string("power") == CountClass::perfect_power);
    CHECK_FALSE(count_class_from_string("triangular").has_value());
}
