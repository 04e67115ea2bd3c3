#include "multavg/oracles.hpp"

#include <cmath>
#include <sstream>

#include "multavg/errors.hpp"

namespace multavg {
namespace {

void require_ascending(std::span<const std::int64_t> checkpoints, const char* what) {
    if (checkpoints.empty()) throw InvalidArgument(std::string(what) + ": no checkpoints");
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
            throw InvalidArgument(std::string(what) + ": checkpoints must be positive and strictly ascending");
}

// e(n alpha / N), exact rational reduction when alpha is an integer.
Complex twiddle(std::int64_t n, double alpha, std::int64_t N) {
    if (alpha == std::nearbyint(alpha) && std::abs(alpha) < 9e15) {
        const auto k = static_cast<int128>(static_cast<std::int64_t>(alpha));
        const auto r = static_cast<std::int64_t>((k * n) % N);
        return e_rational(r, N);
    }
    double x = static_cast<double>(n) * alpha / static_cast<double>(N);
    x -= std::floor(x);
    return e(x);
}

} // namespace

PartialCheck partial_prime_check(const AsymptoticHypothesis& h, double alpha,
                                 std::span<const std::int64_t> checkpoints, double quad_tol) {
    require_ascending(checkpoints, "partial_prime_check");
    if (!h.a) throw InvalidArgument("partial_prime_check: hypothesis has no sequence");
    if (checkpoints.back() > h.n_max) {
        std::ostringstream msg;
        msg << "partial_prime_check: checkpoint " << checkpoints.back() << " beyond the sequence range " << h.n_max;
        throw RangeError(msg.str());
    }

    PartialCheck out;
    out.alpha = alpha;
    const double t = h.t;
    QuadratureOptions qo;
    qo.abs_tol = quad_tol;
    const QuadratureResult integral = integrate(
        [t, alpha](double y) { return std::polar(1.0, t * std::log(y) + kTwoPi * alpha * y); }, 0.0, 1.0, qo);
    out.c_prime = h.c * Complex(1.0, t) * integral.value;
    out.quadrature_error = integral.error_estimate;

    for (std::int64_t N : checkpoints) {
        CompensatedComplexSum sum;
        for (std::int64_t n = 1; n <= N; ++n) {
            const Complex v = h.a(n);
            if (std::abs(v) > h.bound + 1e-12) {
                std::ostringstream msg;
                msg << "partial_prime_check: |a(" << n << ")| = " << std::abs(v) << " exceeds the bound " << h.bound;
                throw DomainViolation(msg.str());
            }
            sum.add(alpha == 0.0 ? v : v * twiddle(n, alpha, N));
        }
        PartialRow row;
        row.N = N;
        row.lhs = sum.value() / static_cast<double>(N);
        row.rhs = out.c_prime / renormalization_factor(N, t, h.w);
        row.difference = std::abs(row.lhs - row.rhs);
        out.rows.push_back(row);
    }
    return out;
}

MajorArcCheck major_arc_fourier(const SieveTable& f, std::int64_t p, std::int64_t Q, std::int64_t xi_prime,
                                const HalaszParams& params, std::span<const std::int64_t> checkpoints) {
    require_ascending(checkpoints, "major_arc_fourier");
    if (Q < 1) throw InvalidArgument("major_arc_fourier: Q must be >= 1");
    if (((p + xi_prime) % Q + Q) % Q != 0) {
        std::ostringstream msg;
        msg << "major_arc_fourier: need p + xi' = 0 mod Q (p = " << p << ", xi' = " << xi_prime << ", Q = " << Q << ")";
        throw InvalidArgument(msg.str());
    }
    if (checkpoints.back() > f.size()) {
        std::ostringstream msg;
        msg << "major_arc_fourier: checkpoint " << checkpoints.back() << " exceeds the sieve length " << f.size();
        throw RangeError(msg.str());
    }
    MajorArcCheck out;
    std::vector<Complex> renorm;
    for (std::int64_t N : checkpoints) {
        if (N % Q != 1 % Q) {
            std::ostringstream msg;
            msg << "major_arc_fourier: checkpoint N = " << N << " is not 1 mod " << Q;
            throw InvalidArgument(msg.str());
        }
        const std::int64_t xi = static_cast<std::int64_t>((static_cast<int128>(p) * N + xi_prime) / Q);
        std::int64_t xi_mod = xi % N;
        if (xi_mod < 0) xi_mod += N;
        CompensatedComplexSum sum;
        for (std::int64_t n = 1; n <= N; ++n) {
            if (xi_mod == 0) {
                sum.add(f[n]);
            } else {
                const auto r = static_cast<std::int64_t>((static_cast<int128>(n) * xi_mod) % N);
                sum.add(f[n] * e_rational(-r, N));
            }
        }
        MajorArcRow row;
        row.N = N;
        row.xi = xi;
        row.coefficient = sum.value() / static_cast<double>(N);
        row.renormalized = row.coefficient * renormalization_factor(N, params.t, params.w);
        renorm.push_back(row.renormalized);
        out.rows.push_back(row);
    }
    out.stabilization = diagnose_stabilization(checkpoints, renorm);
    return out;
}

StructuredCheck structured_average_check(const FormSystem& system, std::span<const ValueView> functions,
                                         std::int64_t Q, std::int64_t V, std::span<const HalaszParams> params,
                                         std::span<const std::int64_t> checkpoints, const AverageOptions& opts) {
    require_ascending(checkpoints, "structured_average_check");
    if (functions.size() != system.size() || params.size() != system.size())
        throw InvalidArgument("structured_average_check: one function and one parameter set per form required");
    StructuredCheck out;
    Sequence w = Sequence::zero();
    for (const auto& p : params) {
        out.t += p.t;
        w = w + p.w;
    }
    std::vector<Complex> renorm;
    for (std::int64_t N : checkpoints) {
        const std::int64_t N_tilde = companion_prime(system, N, Q);
        const KernelSpec spec{Q, V, N_tilde};
        const Kernel kernel = build_kernel(spec);
        std::vector<Decomposition> parts;
        parts.reserve(functions.size());
        for (const auto& f : functions) parts.push_back(decompose(f, kernel));
        std::vector<ValueView> structured;
        for (const auto& d : parts) structured.push_back(d.structured());

        StructuredRow row;
        row.N = N;
        row.N_tilde = N_tilde;
        row.structured = multilinear_average(system, structured, N, opts);
        row.renormalized = row.structured * renormalization_factor(N, out.t, w);
        row.full = multilinear_average(system, functions, N, opts);
        row.gap = std::abs(row.full - row.structured);
        renorm.push_back(row.renormalized);
        out.rows.push_back(row);
    }
    out.stabilization = diagnose_stabilization(checkpoints, renorm);
    return out;
}

} // namespace multavg
