#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "multavg/arith.hpp"
#include "multavg/averages.hpp"
#include "multavg/ergodic.hpp"
#include "multavg/fft.hpp"
#include "multavg/gowers.hpp"

using namespace multavg;

namespace {

std::vector<Complex> random_signal(std::size_t n) {
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> v(n);
    for (auto& x : v) x = {u(rng), u(rng)};
    return v;
}

void BM_Sieve(benchmark::State& state) {
    const auto f = builtin("liouville");
    for (auto _ : state) benchmark::DoNotOptimize(sieve_values(f, state.range(0)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sieve)->Arg(100000)->Arg(1000000);

void BM_Fft(benchmark::State& state) {
    const auto v = random_signal(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fourier_coefficients(v));
}
// Powers of two, a prime (Bluestein) and a smooth composite.
BENCHMARK(BM_Fft)->Arg(1024)->Arg(4096)->Arg(4099)->Arg(6000);

void BM_ThreeTermAverage(benchmark::State& state) {
    const std::int64_t N = state.range(0);
    const FormSystem sys({LinearForm({1, 0}), LinearForm({1, 1}), LinearForm({1, 2})});
    const auto lambda = sieve_values(builtin("liouville"), sys.max_value(N));
    const std::vector<ValueView> fs = {lambda, lambda, lambda};
    AverageOptions opts;
    opts.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(multilinear_average(sys, fs, N, opts));
    state.SetItemsProcessed(state.iterations() * N * N);
}
BENCHMARK(BM_ThreeTermAverage)->Args({1000, 1})->Args({2000, 1})->Args({2000, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_ErgodicAverage(benchmark::State& state) {
    const std::vector<std::pair<LinearForm, LinearForm>> pairs = {{LinearForm({1, 1}), LinearForm({1, 2})}};
    const TrigObservable F{{{1, Complex(1, 0)}}}, G{{{-1, Complex(1, 0)}}};
    for (auto _ : state)
        benchmark::DoNotOptimize(ergodic_average(LogRotationAction{1.0}, F, G, pairs, state.range(0)));
}
BENCHMARK(BM_ErgodicAverage)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_GowersRecursive(benchmark::State& state) {
    const CyclicSignal a(random_signal(static_cast<std::size_t>(state.range(0))));
    const auto s = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(gowers_norm(a, s));
}
BENCHMARK(BM_GowersRecursive)->Args({256, 2})->Args({1024, 2})->Args({128, 3})->Args({256, 3})
    ->Unit(benchmark::kMillisecond);

void BM_GowersFast(benchmark::State& state) {
    const CyclicSignal a(random_signal(static_cast<std::size_t>(state.range(0))));
    const auto s = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(gowers_norm_fast(a, s));
}
BENCHMARK(BM_GowersFast)->Args({256, 2})->Args({1024, 2})->Args({128, 3})->Args({256, 3})
    ->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
