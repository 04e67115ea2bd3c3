#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "multavg/arith.hpp"
#include "multavg/errors.hpp"
#include "multavg/gowers.hpp"

using namespace multavg;

namespace {

CyclicSignal random_signal(std::size_t N, std::uint64_t seed, bool complex_valued) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> v(N);
    for (auto& x : v) x = complex_valued ? std::polar(u(rng), kTwoPi * u(rng)) : Complex(u(rng) < 0.5 ? -1.0 : 1.0, 0);
    return CyclicSignal(v);
}

// U^2 from the autocorrelation form E_h |E_n a(n) conj a(n+h)|^2, independent
// of both the recursion and the FFT.
double u2_autocorrelation(const CyclicSignal& a) {
    const auto N = a.modulus();
    double acc = 0.0;
    for (std::int64_t h = 0; h < N; ++h) {
        Complex r{};
        for (std::int64_t n = 0; n < N; ++n) r += a[n] * std::conj(a[(n + h) % N]);
        acc += std::norm(r / double(N));
    }
    return std::pow(acc / double(N), 0.25);
}

CyclicSignal parity_on(std::int64_t M) {
    const auto f = sieve_values(builtin("parity"), M);
    return CyclicSignal::embed(f, M);
}

} // namespace

TEST_CASE("constant signal has every norm 1") {
    const CyclicSignal one(std::vector<Complex>(30, Complex(1, 0)));
    for (unsigned s = 1; s <= 4; ++s) CHECK(std::abs(gowers_norm(one, s) - 1.0) < 1e-12);
    CHECK(std::abs(gowers_u2_spectral(one) - 1.0) < 1e-12);
    CHECK(std::abs(gowers_u3_via_u2(one) - 1.0) < 1e-12);
}

TEST_CASE("linear and quadratic phases") {
    const std::int64_t N = 101;
    std::vector<Complex> lin(N), quad(N);
    for (std::int64_t n = 0; n < N; ++n) {
        lin[n] = e_rational(n, N);
        quad[n] = e_rational(n * n % N, N);
    }
    CHECK(std::abs(gowers_u2_spectral(CyclicSignal(lin)) - 1.0) < 1e-12);
    CHECK(std::abs(gowers_norm(CyclicSignal(lin), 2) - 1.0) < 1e-12);
    CHECK(std::abs(gowers_u3_via_u2(CyclicSignal(quad)) - 1.0) < 1e-12);
    CHECK(std::abs(gowers_norm(CyclicSignal(quad), 3) - 1.0) < 1e-12);
    // A quadratic phase on a prime modulus is U^2-small: |a_hat| = N^{-1/2}.
    CHECK(std::abs(gowers_u2_spectral(CyclicSignal(quad)) - std::pow(double(N), -0.25)) < 1e-12);
}

TEST_CASE("parity on an even modulus is a character") {
    CHECK(std::abs(gowers_norm(parity_on(1000), 2) - 1.0) < 1e-9);
    CHECK(std::abs(gowers_u2_spectral(parity_on(1000)) - 1.0) < 1e-9);
}

TEST_CASE("parity on an odd modulus") {
    // |a_hat(xi)| ~ 1/(pi |xi - M/2|), so sum |a_hat|^4 -> 1/3 and the limit
    // is 3^{-1/4}.
    const double limit = std::pow(3.0, -0.25);
    const auto a = parity_on(1001);
    const double rec = gowers_norm(a, 2);
    CHECK(std::abs(rec - u2_autocorrelation(a)) < 1e-12);
    CHECK(std::abs(rec - limit) < 1e-5);
    CHECK(std::abs(gowers_u2_spectral(parity_on(10001)) - limit) < 1e-7);
}

TEST_CASE("spectral and recursive U2 agree on random signals") {
    for (std::size_t N : {64u, 127u, 256u})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto a = random_signal(N, seed, seed % 2);
            const double rec = gowers_norm(a, 2);
            CHECK(std::abs(gowers_u2_spectral(a) - rec) < 1e-9);
            CHECK(std::abs(u2_autocorrelation(a) - rec) < 1e-12);
        }
}

TEST_CASE("U3 through U2 agrees with the recursion") {
    for (std::size_t N : {32u, 64u, 127u, 128u}) {
        const auto a = random_signal(N, N, true);
        CHECK(std::abs(gowers_u3_via_u2(a) - gowers_norm(a, 3)) < 1e-9);
        CHECK(std::abs(gowers_norm_fast(a, 3) - gowers_norm(a, 3)) < 1e-9);
    }
}

TEST_CASE("monotonicity, sup bound and invariances") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t N = 24 + seed * 5;
        const auto a = random_signal(N, seed, seed % 2 == 0);
        double prev = 0.0;
        for (unsigned s = 1; s <= 4; ++s) {
            const double u = gowers_norm(a, s);
            CHECK(u >= prev - 1e-12);
            CHECK(u <= a.sup_norm() + 1e-12);
            prev = u;
        }
        const Complex c = std::polar(1.0, 0.7);
        const std::size_t h = seed + 3;
        std::vector<Complex> shifted(N), modulated(N);
        for (std::size_t n = 0; n < N; ++n) {
            shifted[n] = c * a[std::int64_t((n + h) % N)];
            modulated[n] = a[std::int64_t(n)] * e_rational(std::int64_t(3 * n % N), std::int64_t(N));
        }
        for (unsigned s = 1; s <= 3; ++s)
            CHECK(std::abs(gowers_norm(CyclicSignal(shifted), s) - gowers_norm(a, s)) < 1e-12);
        for (unsigned s = 2; s <= 3; ++s)
            CHECK(std::abs(gowers_norm(CyclicSignal(modulated), s) - gowers_norm(a, s)) < 1e-12);
    }
}

TEST_CASE("thread count does not change the recursion") {
    const auto a = random_signal(90, 4, true);
    GowersOptions many;
    many.threads = 3;
    CHECK(gowers_norm(a, 3) == gowers_norm(a, 3, many));
}

TEST_CASE("cost guard and embedding") {
    const CyclicSignal big(std::vector<Complex>(1001, Complex(1, 0)));
    CHECK_THROWS_AS(gowers_norm(big, 4), CostGuardExceeded);
    CHECK_NOTHROW(gowers_norm(CyclicSignal(std::vector<Complex>(177, Complex(1, 0))), 4));
    CHECK_THROWS_AS(gowers_u3_via_u2(CyclicSignal(std::vector<Complex>(65537, Complex(1, 0)))), CostGuardExceeded);

    const auto lambda = sieve_values(builtin("liouville"), 100);
    const auto a = CyclicSignal::embed(lambda, 10, 13);
    CHECK(a.modulus() == 13);
    CHECK(a[0] == Complex(0, 0));
    CHECK(a[10] == lambda[10]);
    CHECK(a[11] == Complex(0, 0));
    CHECK(a.sup_norm() <= 1.0);
    const auto wrap = CyclicSignal::embed(lambda, 10);
    CHECK(wrap[0] == lambda[10]);
    CHECK_THROWS_AS(CyclicSignal::embed(lambda, 101, 200), RangeError);
    CHECK_THROWS_AS(CyclicSignal::embed(lambda, 14, 13), InvalidArgument);
}
