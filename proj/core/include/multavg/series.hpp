#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "multavg/numeric.hpp"

namespace multavg {

/// A real sequence n -> w(n) evaluable on [1, limit].
class Sequence {
public:
    Sequence(std::function<double(std::int64_t)> fn, std::int64_t limit)
        : fn_(std::move(fn)), limit_(limit) {}

    /// w = 0 on all of N.
    static Sequence zero();

    std::int64_t limit() const noexcept { return limit_; }
    /// Throws RangeError outside [1, limit].
    double operator()(std::int64_t n) const;

    Sequence operator-() const;
    friend Sequence operator+(const Sequence& a, const Sequence& b);

private:
    std::function<double(std::int64_t)> fn_;
    std::int64_t limit_;
};

/// Phase factor N^{-it} exp(-i w(N)) that removes the predicted rotation
/// of an average with parameters (t, w). The sequence w is measured in
/// radians.
Complex renormalization_factor(std::int64_t N, double t, const Sequence& w);

/// Largest pairwise distance among the points.
inline double oscillation_width(std::span<const Complex> z) {
    double best = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) best = std::max(best, std::abs(z[i] - z[j]));
    return best;
}

/// Max minus min of real values.
inline double oscillation_width(std::span<const double> x) {
    if (x.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

/// Convergence diagnostics for a series sampled at ascending checkpoints.
struct Stabilization {
    double last_three_width = 0.0;  // width over the last three checkpoints
    double last_decade_width = 0.0; // width over checkpoints N >= N_max / 10
    bool stabilized = false;        // last_three_width < tolerance
};

inline constexpr double kDefaultStabilizationTolerance = 5e-2;

Stabilization diagnose_stabilization(std::span<const std::int64_t> checkpoints, std::span<const Complex> values,
                                     double tolerance = kDefaultStabilizationTolerance);

/// Geometric ladder base * 2^k, k = 0..count-1.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t base, std::size_t count);

} // namespace multavg
