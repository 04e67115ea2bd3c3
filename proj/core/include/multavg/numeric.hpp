#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace multavg {

// 128-bit intermediates for exact modular products.
__extension__ using int128 = __int128;
__extension__ using uint128 = unsigned __int128;

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e(x) = exp(2 pi i x).
inline Complex e(double x) { return std::polar(1.0, kTwoPi * x); }

/// e(num/den) with the fraction reduced exactly before the conversion to
/// floating point, so large numerators do not lose phase accuracy.
inline Complex e_rational(std::int64_t num, std::int64_t den) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    if (r == 0) return {1.0, 0.0};
    if (2 * r == den) return {-1.0, 0.0};
    if (4 * r == den) return {0.0, 1.0};
    if (4 * r == 3 * den) return {0.0, -1.0};
    return std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(den));
}

/// n^{it}.
inline Complex n_pow_it(double n, double t) { return std::polar(1.0, t * std::log(n)); }

/// Distance from x to the nearest integer.
inline double dist_to_int(double x) { return std::abs(x - std::nearbyint(x)); }

/// Neumaier (improved Kahan) summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(Complex z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    Complex value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

} // namespace multavg
