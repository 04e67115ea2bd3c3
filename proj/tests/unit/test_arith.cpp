#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "multavg/arith.hpp"
#include "multavg/errors.hpp"

using namespace multavg;

namespace {

bool trial_division_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int big_omega(std::int64_t n) {
    int k = 0;
    for (std::int64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            n /= d;
            ++k;
        }
    return k + (n > 1 ? 1 : 0);
}

std::vector<Complex> values(const SieveTable& t) {
    return std::vector<Complex>(t.indexed().begin() + 1, t.indexed().end());
}

} // namespace

TEST_CASE("primes_up_to") {
    CHECK(primes_up_to(10) == std::vector<std::int64_t>{2, 3, 5, 7});
    CHECK(primes_up_to(2) == std::vector<std::int64_t>{2});
    CHECK(primes_up_to(1).empty());
    CHECK(primes_up_to(0).empty());
    const auto p = primes_up_to(100);
    CHECK(p.size() == 25);
    std::vector<std::int64_t> oracle;
    for (std::int64_t n = 2; n <= 5000; ++n)
        if (trial_division_prime(n)) oracle.push_back(n);
    CHECK(primes_up_to(5000) == oracle);
}

TEST_CASE("is_prime and factorize") {
    for (std::uint64_t n = 0; n < 3000; ++n) CHECK(is_prime(n) == trial_division_prime(std::int64_t(n)));
    CHECK(is_prime(18446744073709551557ULL));
    CHECK_FALSE(is_prime(18446744073709551555ULL));
    const auto f = factorize(360);
    CHECK(f == std::vector<std::pair<std::uint64_t, unsigned>>{{2, 3}, {3, 2}, {5, 1}});
    CHECK(euler_phi(12) == 4);
    CHECK(euler_phi(1) == 1);
    CHECK(gcd(12, 18) == 6);
}

TEST_CASE("sieve examples") {
    const auto lambda = sieve_values(builtin("liouville"), 12);
    CHECK(lambda[12] == Complex(-1, 0));
    for (std::int64_t n = 1; n <= 12; ++n) CHECK(lambda[n].real() == (big_omega(n) % 2 ? -1.0 : 1.0));

    const auto one = sieve_values(builtin("one"), 50);
    for (std::int64_t n = 1; n <= 50; ++n) CHECK(one[n] == Complex(1, 0));

    const auto mu = sieve_values(builtin("moebius"), 6);
    CHECK(values(mu) == std::vector<Complex>{1, -1, -1, 0, -1, 1});
}

TEST_CASE("builtin examples") {
    CHECK(values(sieve_values(builtin("parity"), 4)) == std::vector<Complex>{1, -1, 1, -1});
    CHECK(values(sieve_values(builtin("two_adic_sign"), 6)) == std::vector<Complex>{1, -1, 1, 1, 1, -1});
    const auto a0 = sieve_values(builtin("archimedean(0)"), 30);
    for (std::int64_t n = 1; n <= 30; ++n) CHECK(a0[n] == Complex(1, 0));

    const auto parity = sieve_values(builtin("parity"), 1000);
    for (std::int64_t n = 1; n <= 1000; ++n) CHECK(parity[n].real() == (n % 2 ? 1.0 : -1.0));

    const auto a1 = sieve_values(builtin("archimedean(1)"), 500);
    for (std::int64_t n = 1; n <= 500; ++n) CHECK(std::abs(a1[n] - std::polar(1.0, std::log(double(n)))) < 1e-12);

    CHECK_THROWS_AS(builtin("nope"), InvalidArgument);
    CHECK_THROWS_AS(builtin("character(5)"), InvalidArgument);
    CHECK_THROWS_AS(builtin("character(5,4)"), InvalidArgument);
}

TEST_CASE("sieve rejects values outside the unit disc") {
    const auto bad = MultiplicativeSpec::completely_multiplicative("bad", [](std::uint64_t p) {
        return p == 7 ? Complex(1.5, 0) : Complex(1, 0);
    }, true);
    CHECK_NOTHROW(sieve_values(bad, 6));
    CHECK_THROWS_AS(sieve_values(bad, 7), DomainViolation);
}

TEST_CASE("sieve table access") {
    const auto t = sieve_values(builtin("one"), 10);
    CHECK(t.size() == 10);
    CHECK_THROWS_AS(t.at(0), RangeError);
    CHECK_THROWS_AS(t.at(11), RangeError);
    CHECK(t.at(10) == Complex(1, 0));
}

TEST_CASE("multiplicativity on coprime pairs for every builtin") {
    const std::int64_t M = 3000;
    for (const char* name : {"liouville", "moebius", "parity", "two_adic_sign", "archimedean(0.7)", "character(12,3)",
                             "random_pm1(5)", "twisted(5,1,0.5)"}) {
        const auto t = sieve_values(builtin(name), M);
        CHECK(t[1] == Complex(1, 0));
        double worst = 0.0, sup = 0.0;
        for (std::int64_t m = 1; m <= M; ++m) {
            sup = std::max(sup, std::abs(t[m]));
            for (std::int64_t n = 1; m * n <= M; ++n)
                if (std::gcd(m, n) == 1) worst = std::max(worst, std::abs(t[m * n] - t[m] * t[n]));
        }
        INFO(name);
        CHECK(worst <= 1e-12);
        CHECK(sup <= 1.0 + 1e-12);
    }
}

TEST_CASE("completely multiplicative specs satisfy f(p^k) = f(p)^k") {
    for (const char* name : {"liouville", "two_adic_sign", "archimedean(1.3)", "character(7,2)", "random_pm1(3)"}) {
        const auto spec = builtin(name);
        CHECK(spec.is_completely_multiplicative());
        for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u})
            for (unsigned k = 1; k <= 6; ++k)
                CHECK(std::abs(spec.prime_power_value(p, k) - std::pow(spec.prime_power_value(p, 1), int(k))) < 1e-12);
    }
    CHECK_FALSE(builtin("parity").is_completely_multiplicative());
    CHECK_FALSE(builtin("moebius").is_completely_multiplicative());
}

TEST_CASE("segmented and linear sieves agree") {
    SieveOptions lin;
    lin.method = SieveMethod::linear;
    SieveOptions seg;
    seg.method = SieveMethod::segmented;
    seg.segment_length = 997;
    for (const char* name : {"liouville", "moebius", "parity", "archimedean(2)", "character(9,4)"}) {
        const auto a = sieve_values(builtin(name), 20000, lin);
        const auto b = sieve_values(builtin(name), 20000, seg);
        double worst = 0.0;
        for (std::int64_t n = 1; n <= 20000; ++n) worst = std::max(worst, std::abs(a[n] - b[n]));
        INFO(name);
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("random_pm1 is reproducible and seed dependent") {
    const auto a = sieve_values(random_pm1(42), 5000);
    const auto b = sieve_values(random_pm1(42), 5000);
    const auto c = sieve_values(random_pm1(43), 5000);
    CHECK(values(a) == values(b));
    CHECK(values(a) != values(c));
    int plus = 0;
    for (auto p : primes_up_to(5000)) {
        CHECK(std::abs(std::abs(a[p].real()) - 1.0) == 0.0);
        plus += a[p].real() > 0;
    }
    CHECK(plus > 250);
    CHECK(plus < 420);
}

TEST_CASE("dirichlet character examples") {
    const auto trivial = dirichlet_character(1, 0);
    for (int n = -3; n < 10; ++n) CHECK(trivial(n) == Complex(1, 0));

    const auto chi3 = dirichlet_character(3, 1);
    CHECK(chi3(1) == Complex(1, 0));
    CHECK(chi3(2) == Complex(-1, 0));
    CHECK(chi3(0) == Complex(0, 0));
    CHECK(chi3.is_real());

    std::vector<DirichletCharacter> mod5;
    for (std::uint64_t i = 0; i < 4; ++i) mod5.push_back(dirichlet_character(5, i));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Complex s{};
            for (int n = 0; n < 5; ++n) s += mod5[i](n) * std::conj(mod5[j](n));
            CHECK(std::abs(s / 4.0 - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    CHECK_THROWS_AS(dirichlet_character(5, 4), InvalidArgument);
    CHECK_THROWS_AS(dirichlet_character(0, 0), InvalidArgument);
}

TEST_CASE("character invariants for q <= 20") {
    for (std::uint64_t q = 1; q <= 20; ++q) {
        const std::uint64_t phi = euler_phi(q);
        std::vector<DirichletCharacter> chars;
        for (std::uint64_t i = 0; i < phi; ++i) chars.push_back(dirichlet_character(q, i));
        CHECK(chars[0].is_principal());
        for (const auto& chi : chars) {
            for (std::int64_t n = 0; n < std::int64_t(q); ++n) {
                const bool unit = gcd(std::uint64_t(n), q) == 1;
                CHECK((chi(n) == Complex(0, 0)) == !unit);
                if (unit) {
                    CHECK(std::abs(std::abs(chi(n)) - 1.0) < 1e-12);
                    CHECK(std::abs(std::pow(chi(n), int(phi)) - 1.0) < 1e-9);
                }
                CHECK(chi(n + std::int64_t(q)) == chi(n));
                for (std::int64_t m = 0; m < std::int64_t(q); ++m)
                    CHECK(std::abs(chi(m * n) - chi(m) * chi(n)) < 1e-12);
            }
        }
        for (std::size_t i = 0; i < chars.size(); ++i)
            for (std::size_t j = 0; j < chars.size(); ++j) {
                Complex s{};
                for (std::int64_t n = 0; n < std::int64_t(q); ++n) s += chars[i](n) * std::conj(chars[j](n));
                const double expected = i == j ? double(phi) / double(q) : 0.0;
                CHECK(std::abs(s / double(q) - expected) < 1e-12);
            }
    }
}

TEST_CASE("character components follow the generator convention") {
    const auto c = character_components(40);
    REQUIRE(c.size() == 3);
    CHECK(c[0].prime_power == 8);
    CHECK(c[0].generator == 7); // -1 mod 8
    CHECK(c[0].order == 2);
    CHECK(c[1].generator == 5);
    CHECK(c[1].order == 2);
    CHECK(c[2].prime_power == 5);
    CHECK(c[2].generator == 2);
    CHECK(c[2].order == 4);
}

TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(1.0) == "1");
}
