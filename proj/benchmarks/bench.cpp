#include <benchmark/benchmark.h>

#include "carmkit/assemble.hpp"
#include "carmkit/lbuilder.hpp"
#include "carmkit/sieve.hpp"
#include "carmkit/zerosum.hpp"

using namespace carmkit;

static void BM_IsPrimeU64(benchmark::State& state) {
    uint64_t n = 0xffffffffffc5ull; // large prime near 2^48
    for (auto _ : state)
        benchmark::DoNotOptimize(is_prime_u64(n));
}
BENCHMARK(BM_IsPrimeU64);

static void BM_IsPrimeBig(benchmark::State& state) {
    Natural m127 = (Natural(1) << 127) - 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(is_prime(m127));
}
BENCHMARK(BM_IsPrimeBig);

static void BM_Factorize(benchmark::State& state) {
    Natural n = Natural(1'000'003) * 1'000'033;
    for (auto _ : state)
        benchmark::DoNotOptimize(factorize(n));
}
BENCHMARK(BM_Factorize);

static void BM_BuildQ(benchmark::State& state) {
    uint64_t y = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_Q({y, 1.5}));
    state.SetComplexityN(static_cast<int64_t>(y));
}
BENCHMARK(BM_BuildQ)->Arg(10)->Arg(100)->Arg(1000)->Complexity();

static void BM_Davenport(benchmark::State& state) {
    GroupSpec g{{static_cast<uint64_t>(state.range(0))}};
    for (auto _ : state)
        benchmark::DoNotOptimize(davenport_bruteforce(g));
}
BENCHMARK(BM_Davenport)->Arg(8)->Arg(12)->Arg(16);

static void BM_ZeroSumExhaustive(benchmark::State& state) {
    HarvestedPrimes pool;
    pool.k = 1;
    for (uint64_t p : {7, 11, 13, 31, 41, 61, 151, 181, 241, 271, 331, 401})
        pool.entries.push_back({p, p - 1});
    ZeroSumOptions opts;
    opts.exhaustive_threshold = 1u << 21;
    for (auto _ : state)
        benchmark::DoNotOptimize(find_zero_sum_sets(pool, 120, 4, 4, 32, false, opts));
}
BENCHMARK(BM_ZeroSumExhaustive);

static void BM_ZeroSumMitm(benchmark::State& state) {
    HarvestedPrimes pool;
    pool.k = 1;
    for (uint64_t p : {7, 11, 13, 31, 41, 61, 151, 181, 241, 271, 331, 401})
        pool.entries.push_back({p, p - 1});
    ZeroSumOptions opts;
    opts.exhaustive_threshold = 64; // C(12,4) = 495 exceeds this, so MITM runs
    for (auto _ : state)
        benchmark::DoNotOptimize(find_zero_sum_sets(pool, 120, 4, 4, 32, false, opts));
}
BENCHMARK(BM_ZeroSumMitm);

static void BM_VerifyKorselt(benchmark::State& state) {
    std::vector<Natural> factors = {7, 11, 13, 41};
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_korselt(factors));
}
BENCHMARK(BM_VerifyKorselt);

BENCHMARK_MAIN();
