#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "multavg/averages.hpp"
#include "multavg/halasz.hpp"
#include "multavg/structure.hpp"

namespace multavg {

/// A bounded sequence a(n) on [1, n_max] assumed to satisfy
/// (1/N) sum_{n<=N} a(n) = c N^{it} e(w(N)) + o(1).
struct AsymptoticHypothesis {
    std::function<Complex(std::int64_t)> a;
    std::int64_t n_max = 0;
    double bound = 1.0;
    Complex c{1.0, 0.0};
    double t = 0.0;
    Sequence w = Sequence::zero();
};

struct PartialRow {
    std::int64_t N = 0;
    Complex lhs; // (1/N) sum a(n) e(n alpha / N)
    Complex rhs; // c' N^{it} e(w(N))
    double difference = 0.0;
};

struct PartialCheck {
    double alpha = 0.0;
    /// c' = c (1 + it) * integral_0^1 y^{it} e(alpha y) dy.
    Complex c_prime;
    double quadrature_error = 0.0;
    std::vector<PartialRow> rows;
};

/// Fourier-weighted averages of a sequence with known asymptotics, against
/// the predicted limit constant. Quadrature tolerance defaults to 1e-8.
PartialCheck partial_prime_check(const AsymptoticHypothesis& h, double alpha,
                                 std::span<const std::int64_t> checkpoints, double quad_tol = 1e-8);

struct MajorArcRow {
    std::int64_t N = 0;
    std::int64_t xi = 0;       // xi_N = (pN + xi') / Q
    Complex coefficient;       // (1/N) sum_{n<=N} f(n) e(-n xi_N / N)
    Complex renormalized;      // times N^{-it} exp(-i w(N))
};

struct MajorArcCheck {
    std::vector<MajorArcRow> rows;
    Stabilization stabilization;
};

/// Fourier coefficients of f at major-arc frequencies xi_N = (p/Q) N + xi'/Q.
/// Requires N = 1 (mod Q) at every checkpoint and p + xi' = 0 (mod Q).
MajorArcCheck major_arc_fourier(const SieveTable& f, std::int64_t p, std::int64_t Q, std::int64_t xi_prime,
                                const HalaszParams& params, std::span<const std::int64_t> checkpoints);

struct StructuredRow {
    std::int64_t N = 0;
    std::int64_t N_tilde = 0;
    Complex structured;    // average of the structured parts over [N]^d
    Complex renormalized;  // structured * N^{-it} exp(-i w(N))
    Complex full;          // average of the functions themselves
    double gap = 0.0;      // |full - structured|
};

struct StructuredCheck {
    double t = 0.0;
    std::vector<StructuredRow> rows;
    Stabilization stabilization;
};

/// Averages of the structured components f_{j,Ntilde,st} = f_{j,Ntilde} * phi
/// on Z_Ntilde, with Ntilde the companion prime for (system, N, Q). Every
/// table must cover [1, Ntilde].
StructuredCheck structured_average_check(const FormSystem& system, std::span<const ValueView> functions,
                                         std::int64_t Q, std::int64_t V, std::span<const HalaszParams> params,
                                         std::span<const std::int64_t> checkpoints, const AverageOptions& opts = {});

} // namespace multavg
