#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "multavg/numeric.hpp"

namespace multavg {

struct QuadratureResult {
    Complex value;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-8;
    std::size_t max_intervals = 20000;
};

using ScalarIntegrand = std::function<Complex(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
/// The interval with the largest local error estimate is bisected until
/// the summed estimate falls below abs_tol. Oscillatory integrands such as
/// y^{it} e(alpha y) are handled by subdivision alone; the error estimate
/// of each panel is |K15 - G7|.
/// Throws NumericFailure (carrying the achieved estimate) when the interval
/// budget is exhausted first.
QuadratureResult integrate(const ScalarIntegrand& f, double a, double b,
                           const QuadratureOptions& opts = {});

using BoxIntegrand = std::function<Complex(std::span<const double>)>;

/// Iterated adaptive quadrature over the unit cube [0,1]^dim, 1 <= dim <= 3.
/// Each nesting level receives a share of the absolute tolerance.
QuadratureResult integrate_unit_cube(const BoxIntegrand& f, std::size_t dim,
                                     const QuadratureOptions& opts = {});

} // namespace multavg
