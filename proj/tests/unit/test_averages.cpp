#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "multavg/arith.hpp"
#include "multavg/averages.hpp"
#include "multavg/errors.hpp"

using namespace multavg;

namespace {

// Direct sum over [N]^d by odometer, no canonical ordering or fast paths.
Complex brute_average(const std::vector<LinearForm>& forms, const std::vector<const SieveTable*>& fs,
                      const std::vector<bool>& conj, std::int64_t N) {
    const std::size_t d = forms.front().dimension();
    std::vector<std::int64_t> m(d, 1);
    Complex s{};
    for (;;) {
        Complex prod{1.0, 0.0};
        for (std::size_t j = 0; j < forms.size(); ++j) {
            const Complex v = (*fs[j])[forms[j].evaluate(m)];
            prod *= conj[j] ? std::conj(v) : v;
        }
        s += prod;
        std::size_t i = 0;
        while (i < d && m[i] == N) m[i++] = 1;
        if (i == d) break;
        ++m[i];
    }
    return s / std::pow(double(N), double(d));
}

} // namespace

TEST_CASE("multilinear average examples") {
    const auto one = sieve_values(builtin("one"), 1000);
    const FormSystem sys({LinearForm({1, 2}), LinearForm({3, 1}), LinearForm({1, 1})});
    const std::vector<ValueView> ones(3, ValueView(one));
    CHECK(multilinear_average(sys, ones, 50) == Complex(1, 0));

    const auto lambda = sieve_values(builtin("liouville"), 1000);
    const FormSystem id({LinearForm({1})});
    const std::vector<ValueView> lam1 = {lambda};
    CHECK(multilinear_average(id, lam1, 10) == Complex(0, 0));

    const FormSystem box({LinearForm({1, 0}), LinearForm({0, 1})});
    const std::vector<ValueView> lam2 = {lambda, lambda};
    double s = 0.0;
    for (std::int64_t n = 1; n <= 100; ++n) s += lambda[n].real();
    CHECK(std::abs(multilinear_average(box, lam2, 100) - (s / 100) * (s / 100)) < 1e-15);
}

TEST_CASE("guards") {
    const auto lambda = sieve_values(builtin("liouville"), 100);
    const FormSystem sys({LinearForm({1, 1})});
    const std::vector<ValueView> f = {lambda};
    CHECK_NOTHROW(multilinear_average(sys, f, 50));
    CHECK_THROWS_AS(multilinear_average(sys, f, 51), RangeError);
    const FormSystem four({LinearForm({1, 1, 1, 1})});
    CHECK_THROWS_AS(multilinear_average(four, f, 2), CostGuardExceeded);
    const FormSystem neg({LinearForm({1}, -1)});
    CHECK_THROWS_AS(multilinear_average(neg, f, 5), InvalidArgument);
    const std::vector<ValueView> two = {lambda, lambda};
    CHECK_THROWS_AS(multilinear_average(sys, two, 5), InvalidArgument);
}

TEST_CASE("agreement with a brute-force oracle") {
    const auto lambda = sieve_values(builtin("liouville"), 4000);
    const auto arch = sieve_values(builtin("archimedean(0.7)"), 4000);
    const auto chi = sieve_values(builtin("twisted(5,1,0.2)"), 4000);
    const std::vector<LinearForm> forms = {LinearForm({1, 0, 2}), LinearForm({1, 1, 0}, 3), LinearForm({2, 1, 1})};
    const std::vector<const SieveTable*> fs = {&lambda, &arch, &chi};
    const std::vector<ValueView> views = {lambda, arch, chi};
    for (std::int64_t N : {1, 5, 17}) {
        const Complex a = multilinear_average(FormSystem(forms), views, N);
        CHECK(std::abs(a - brute_average(forms, fs, {false, false, false}, N)) < 1e-13);
    }
    const std::vector<LinearForm> f2 = {LinearForm({1, 0}), LinearForm({1, 1}), LinearForm({1, 2})};
    const std::vector<ValueView> v2 = {lambda, arch, chi};
    for (std::int64_t N : {3, 64, 150}) {
        const Complex a = multilinear_average(FormSystem(f2), v2, N);
        CHECK(std::abs(a - brute_average(f2, fs, {false, false, false}, N)) < 1e-12);
        CHECK(std::abs(a) <= 1.0 + 1e-12);
    }
}

TEST_CASE("permutation invariance is exact") {
    const auto lambda = sieve_values(builtin("liouville"), 2000);
    const auto arch = sieve_values(builtin("archimedean(1.1)"), 2000);
    const auto mu = sieve_values(builtin("moebius"), 2000);
    std::vector<std::size_t> idx = {0, 1, 2};
    const std::vector<LinearForm> forms = {LinearForm({1, 0}), LinearForm({1, 1}), LinearForm({2, 3})};
    const std::vector<ValueView> fs = {lambda, arch, mu};
    const Complex ref = multilinear_average(FormSystem(forms), fs, 200);
    do {
        std::vector<LinearForm> pf;
        std::vector<ValueView> pv;
        for (auto i : idx) {
            pf.push_back(forms[i]);
            pv.push_back(fs[i]);
        }
        CHECK(multilinear_average(FormSystem(pf), pv, 200) == ref);
    } while (std::next_permutation(idx.begin(), idx.end()));
}

TEST_CASE("separable systems factor exactly and the fast path matches") {
    const auto lambda = sieve_values(builtin("liouville"), 4000);
    const auto arch = sieve_values(builtin("archimedean(-0.4)"), 4000);
    const FormSystem sys({LinearForm({1, 1, 0}), LinearForm({0, 0, 2}), LinearForm({2, 1, 0})});
    const auto groups = separable_groups(sys);
    REQUIRE(groups.size() == 2);
    const std::vector<ValueView> fs = {lambda, arch, lambda};
    AverageOptions slow;
    slow.separable_fast_path = false;
    for (std::int64_t N : {10, 60}) {
        const Complex fast = multilinear_average(sys, fs, N);
        const Complex direct = multilinear_average(sys, fs, N, slow);
        const FormSystem g1({LinearForm({1, 1}), LinearForm({2, 1})});
        const std::vector<ValueView> f1 = {lambda, lambda};
        const FormSystem g2({LinearForm({2})});
        const std::vector<ValueView> f2 = {arch};
        const Complex product = multilinear_average(g1, f1, N) * multilinear_average(g2, f2, N);
        CHECK(std::abs(fast - direct) < 1e-13);
        CHECK(std::abs(fast - product) < 1e-15);
    }
}

TEST_CASE("results are bitwise independent of the thread count") {
    const auto lambda = sieve_values(builtin("liouville"), 6000);
    const auto arch = sieve_values(builtin("archimedean(2)"), 6000);
    const FormSystem sys({LinearForm({1, 0}), LinearForm({1, 1}), LinearForm({1, 2})});
    const std::vector<ValueView> fs = {lambda, arch, lambda};
    AverageOptions one;
    AverageOptions many;
    many.threads = 4;
    CHECK(multilinear_average(sys, fs, 1000, one) == multilinear_average(sys, fs, 1000, many));
}

TEST_CASE("renormalized series") {
    const auto lambda = sieve_values(builtin("liouville"), 5000);
    const FormSystem sys({LinearForm({1, 0}), LinearForm({1, 1})});
    const std::vector<ValueView> fs = {lambda, lambda};
    const std::vector<HalaszParams> trivial(2, HalaszParams::trivial());
    const std::vector<std::int64_t> cps = {100, 200, 400, 800, 1600};
    const auto s = renormalized_series(sys, fs, trivial, cps);
    CHECK(s.t == 0.0);
    for (std::size_t i = 0; i < cps.size(); ++i) {
        CHECK(s.raw[i] == s.renormalized[i]);
        CHECK(std::abs(s.raw[i]) <= 1.0);
    }

    const auto a1 = sieve_values(builtin("archimedean(1)"), 5000);
    const auto am1 = sieve_values(builtin("archimedean(-1)"), 5000);
    const std::vector<ValueView> pair = {a1, am1};
    const std::vector<HalaszParams> pp = {HalaszParams::manual(1.0, Sequence::zero()),
                                          HalaszParams::manual(-1.0, Sequence::zero())};
    const auto s2 = renormalized_series(sys, pair, pp, cps);
    CHECK(s2.t == 0.0);
    for (std::size_t i = 0; i < cps.size(); ++i) CHECK(s2.raw[i] == s2.renormalized[i]);

    const auto arch = sieve_values(builtin("archimedean(1)"), 100000);
    const FormSystem idn({LinearForm({1})});
    const std::vector<ValueView> fa = {arch};
    const std::vector<HalaszParams> pa = {HalaszParams::manual(1.0, Sequence::zero())};
    const std::vector<std::int64_t> big = {1000, 10000, 100000};
    const auto s3 = renormalized_series(idn, fa, pa, big);
    CHECK(std::abs(s3.renormalized.back() - 1.0 / Complex(1, 1)) < 1e-2);
    for (std::size_t i = 0; i < big.size(); ++i) CHECK(std::abs(std::abs(s3.renormalized[i]) - std::abs(s3.raw[i])) < 1e-12);

    const FormSystem dep({LinearForm({1}), LinearForm({1}, 1)});
    const std::vector<ValueView> fl = {lambda, lambda};
    CHECK_THROWS_AS(renormalized_series(dep, fl, trivial, cps), InvalidArgument);
    const FormSystem dep0({LinearForm({1}), LinearForm({2})});
    const auto sd = renormalized_series(dep0, fl, trivial, cps);
    CHECK(sd.dependent_pairs.size() == 1);
}

TEST_CASE("conjugate pair average") {
    const auto one = sieve_values(builtin("one"), 1000);
    const std::vector<std::pair<LinearForm, LinearForm>> pairs = {{LinearForm({1, 1}), LinearForm({1, 2})}};
    const std::vector<ValueView> f1 = {one};
    CHECK(conjugate_pair_average(pairs, f1, 100).value == Complex(1, 0));

    const auto lambda = sieve_values(builtin("liouville"), 1000);
    const std::vector<ValueView> fl = {lambda};
    const FormSystem plain({LinearForm({1, 1}), LinearForm({1, 2})});
    const std::vector<ValueView> fl2 = {lambda, lambda};
    CHECK(std::abs(conjugate_pair_average(pairs, fl, 300).value - multilinear_average(plain, fl2, 300)) < 1e-15);

    const auto arch = sieve_values(builtin("archimedean(0.9)"), 1000);
    const std::vector<ValueView> fa = {arch};
    const std::vector<const SieveTable*> fs = {&arch, &arch};
    const Complex oracle = brute_average({LinearForm({1, 1}), LinearForm({1, 2})}, fs, {false, true}, 120);
    CHECK(std::abs(conjugate_pair_average(pairs, fa, 120).value - oracle) < 1e-13);

    const std::vector<std::pair<LinearForm, LinearForm>> dep = {{LinearForm({1, 1}), LinearForm({2, 2})}};
    CHECK(conjugate_pair_average(dep, fa, 50).dependent_pairs.size() == 1);
}

TEST_CASE("archimedean limit") {
    const FormSystem idn({LinearForm({1})});
    CHECK(archimedean_limit(idn, std::vector<double>{0.0}).value == Complex(1, 0));
    CHECK(std::abs(archimedean_limit(idn, std::vector<double>{1.0}).value - 1.0 / Complex(1, 1)) < 1e-6);

    // Independent oracle: 2-D midpoint rule with Richardson extrapolation.
    const FormSystem pair({LinearForm({1, 1}), LinearForm({1, 2})});
    const double t = kTwoPi;
    auto midpoint = [&](int n) {
        Complex s{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double x = (i + 0.5) / n, y = (j + 0.5) / n;
                s += std::polar(1.0, t * (std::log(x + y) - std::log(x + 2 * y)));
            }
        return s / double(n * n);
    };
    const Complex rich = (4.0 * midpoint(1600) - midpoint(800)) / 3.0;
    const Complex q = archimedean_limit(pair, std::vector<double>{t, -t}).value;
    CHECK(std::abs(q - rich) < 1e-5);

    const auto arch = sieve_values(builtin("archimedean(6.283185307179586)"), 12000);
    const std::vector<std::pair<LinearForm, LinearForm>> pairs = {{LinearForm({1, 1}), LinearForm({1, 2})}};
    const std::vector<ValueView> fa = {arch};
    CHECK(std::abs(conjugate_pair_average(pairs, fa, 4000).value - q) < 1e-2);

    const FormSystem off({LinearForm({1}, 1)});
    CHECK_THROWS_AS(archimedean_limit(off, std::vector<double>{1.0}), InvalidArgument);
}
