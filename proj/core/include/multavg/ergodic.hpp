#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "multavg/forms.hpp"
#include "multavg/numeric.hpp"

namespace multavg {

/// T_n x = x + c log n (mod 1) on the circle [0, 1).
struct LogRotationAction {
    double c = 1.0;

    double apply(std::int64_t n, double x) const;
    /// T_{a/b} x = x + c log(a/b) (mod 1).
    double apply_rational(std::int64_t a, std::int64_t b, double x) const;
};

/// F(x) = sum_k c_k e(k x).
struct TrigObservable {
    std::vector<std::pair<std::int64_t, Complex>> terms;

    Complex operator()(double x) const;
    double sup_bound() const;
    TrigObservable conjugate() const;
};

struct ErgodicOptions {
    unsigned threads = 1;
    std::int64_t block_rows = 64;
};

struct ErgodicResult {
    Complex value;
    /// Pairs among L_1..L_l, L'_1..L'_l that are dependent (diagnostic).
    std::vector<std::pair<std::size_t, std::size_t>> dependent_pairs;
};

/// (1/N^d) sum over m in [N]^d of the integral of F(T_A x) G(T_B x) dx with
/// A = prod L_j(m), B = prod L'_j(m), evaluated term by term in closed form.
/// Dimension at most 2.
ErgodicResult ergodic_average(const LogRotationAction& action, const TrigObservable& F, const TrigObservable& G,
                              std::span<const std::pair<LinearForm, LinearForm>> pairs, std::int64_t N,
                              const ErgodicOptions& opts = {});

struct CounterexampleRow {
    std::int64_t N = 0;
    Complex value;       // (1/N) sum_{n<=N} n^{2 pi i c}
    double modulus = 0.0;
    double argument = 0.0;
    Complex asymptotic;  // N^{2 pi i c} / (1 + 2 pi i c)
};

std::vector<CounterexampleRow> counterexample_trace(std::span<const std::int64_t> checkpoints, double c = 1.0);

} // namespace multavg
