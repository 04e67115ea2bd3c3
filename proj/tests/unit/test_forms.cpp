#include <random>
#include <vector>

#include "doctest.h"
#include "multavg/arith.hpp"
#include "multavg/errors.hpp"
#include "multavg/forms.hpp"

using namespace multavg;

TEST_CASE("evaluate examples") {
    const std::vector<std::int64_t> m34 = {3, 4}, m29 = {2, 9}, m111 = {1, 1, 1};
    CHECK(LinearForm({1, 2}).evaluate(m34) == 11);
    CHECK(LinearForm({1, 0}, 5).evaluate(m29) == 7);
    CHECK(LinearForm({1, 1, 1}).evaluate(m111) == 3);
    CHECK_THROWS_AS(LinearForm({1, 2}).evaluate(m111), InvalidArgument);
}

TEST_CASE("form validation") {
    CHECK_THROWS_AS(LinearForm({0, 0}), InvalidArgument);
    CHECK_THROWS_AS(LinearForm({1, -1}), InvalidArgument);
    CHECK_THROWS_AS(LinearForm(std::vector<std::int64_t>{}), InvalidArgument);
    CHECK_THROWS_AS(FormSystem({LinearForm({1}), LinearForm({1, 1})}), InvalidArgument);
}

TEST_CASE("pairwise independence examples") {
    CHECK(pairwise_independent(LinearForm({1, 1}), LinearForm({1, 2})));
    CHECK_FALSE(pairwise_independent(LinearForm({2, 4}), LinearForm({1, 2})));
    CHECK_FALSE(pairwise_independent(LinearForm({1, 0}), LinearForm({1, 0})));
    CHECK_FALSE(pairwise_independent(LinearForm({1, 0}, 3), LinearForm({1, 0}, -1)));
}

TEST_CASE("independence is symmetric and scaling is dependence") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> coef(0, 6);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::int64_t> a(3), b(3);
        for (auto& x : a) x = coef(rng);
        for (auto& x : b) x = coef(rng);
        a[trial % 3] += 1;
        b[(trial + 1) % 3] += 1;
        const LinearForm F(a), G(b);
        CHECK(pairwise_independent(F, G) == pairwise_independent(G, F));
        for (std::int64_t c = 1; c <= 5; ++c) {
            std::vector<std::int64_t> s = a;
            for (auto& x : s) x *= c;
            CHECK_FALSE(pairwise_independent(LinearForm(s), F));
        }
    }
}

TEST_CASE("form text syntax round-trips") {
    const LinearForm a = parse_form("L = [1,2] + 3");
    CHECK(a.coeffs() == std::vector<std::int64_t>{1, 2});
    CHECK(a.offset() == 3);
    const LinearForm b = parse_form("[ 4 , 0 , 1 ] - 2");
    CHECK(b.offset() == -2);
    CHECK(parse_form("[7]").offset() == 0);
    for (const auto& f : {a, b, LinearForm({5}), LinearForm({0, 3}, 11)}) CHECK(parse_form(format_form(f)) == f);
    CHECK_THROWS_AS(parse_form("[1,2"), InvalidArgument);
    CHECK_THROWS_AS(parse_form("1,2"), InvalidArgument);
    CHECK_THROWS_AS(parse_form("[1,x]"), InvalidArgument);
    CHECK_THROWS_AS(parse_form("[1,2] * 3"), InvalidArgument);
}

TEST_CASE("form system constants") {
    const FormSystem s({LinearForm({1, 0}), LinearForm({1, 1}), LinearForm({1, 2})});
    CHECK(s.kappa() == 12);
    CHECK(s.kappa() >= 2 * std::int64_t(s.size()));
    CHECK(s.is_pairwise_independent());
    CHECK_FALSE(s.has_offsets());
    for (std::int64_t N : {1, 7, 50}) {
        for (std::int64_t x = 1; x <= N; ++x)
            for (std::int64_t y = 1; y <= N; ++y) {
                const std::vector<std::int64_t> m = {x, y};
                for (const auto& L : s.forms()) {
                    CHECK(L.evaluate(m) >= 1);
                    CHECK(2 * L.evaluate(m) <= s.kappa() * N);
                }
            }
    }
    const FormSystem dep({LinearForm({1}), LinearForm({1}, 1), LinearForm({2})});
    CHECK(dep.dependent_pairs() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(dep.has_offsets());
}

TEST_CASE("companion prime examples") {
    CHECK(companion_prime(4, 10, 1) == 41);
    CHECK(companion_prime(2, 3, 4) == 13);
    CHECK(companion_prime(2, 1, 1) == 3);
    for (std::int64_t Q : {1, 2, 3, 8, 10})
        for (std::int64_t N : {1, 5, 100}) {
            const std::int64_t p = companion_prime(6, N, Q);
            CHECK(p > 6 * N);
            CHECK(p % Q == 1 % Q);
            CHECK(is_prime(std::uint64_t(p)));
            for (std::int64_t q = 6 * N + 1; q < p; ++q) CHECK_FALSE((is_prime(std::uint64_t(q)) && q % Q == 1 % Q));
        }
    const FormSystem s({LinearForm({1, 0}), LinearForm({0, 1})});
    CHECK(companion_prime(s, 10, 1) == 41);
}
