#include "multavg/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "multavg/errors.hpp"
#include "multavg/fft.hpp"
#include "multavg/parallel.hpp"

namespace multavg {

CyclicSignal::CyclicSignal(std::vector<Complex> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("cyclic signal needs modulus >= 1");
}

CyclicSignal CyclicSignal::embed(const ValueView& f, std::int64_t N, std::int64_t modulus) {
    if (N < 1 || modulus < N) throw InvalidArgument("embed: need 1 <= N <= modulus");
    if (N > f.size()) {
        std::ostringstream msg;
        msg << "embed: table '" << f.name() << "' of length " << f.size() << " does not cover [1, " << N << "]";
        throw RangeError(msg.str());
    }
    std::vector<Complex> v(static_cast<std::size_t>(modulus));
    for (std::int64_t n = 1; n <= N; ++n) v[static_cast<std::size_t>(n % modulus)] = f[n];
    return CyclicSignal(std::move(v));
}

double CyclicSignal::sup_norm() const noexcept {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

namespace {

// ||a||_{U^level}^{2^level}; scratch holds one buffer per level below.
double gowers_power(const Complex* a, std::size_t n, unsigned level, std::vector<std::vector<Complex>>& scratch) {
    if (level == 1) {
        CompensatedComplexSum sum;
        for (std::size_t i = 0; i < n; ++i) sum.add(a[i]);
        return std::norm(sum.value() / static_cast<double>(n));
    }
    auto& b = scratch[level - 2];
    CompensatedSum acc;
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = i + t;
            if (j >= n) j -= n;
            b[i] = a[i] * std::conj(a[j]);
        }
        acc.add(gowers_power(b.data(), n, level - 1, scratch));
    }
    return acc.value() / static_cast<double>(n);
}

double spectral_u2_power(std::vector<Complex>& buf, const FftPlan& plan) {
    plan.forward(buf);
    const double scale = 1.0 / static_cast<double>(buf.size());
    CompensatedSum acc;
    for (const auto& z : buf) {
        const double m2 = std::norm(z * scale);
        acc.add(m2 * m2);
    }
    return acc.value();
}

} // namespace

double gowers_norm(const CyclicSignal& a, unsigned s, const GowersOptions& opts) {
    if (s < 1) throw InvalidArgument("gowers_norm: s must be >= 1");
    const std::size_t n = a.values().size();
    const double cost = std::pow(static_cast<double>(n), static_cast<double>(s));
    if (cost > opts.cost_limit) {
        std::ostringstream msg;
        msg << "gowers_norm: recursive U^" << s << " on Z_" << n << " costs N^s = " << cost << " > "
            << opts.cost_limit << "; use the spectral path (s = 2) or the U^2-based path (s = 3)";
        throw CostGuardExceeded(msg.str());
    }
    if (s == 1) {
        std::vector<std::vector<Complex>> none;
        return std::sqrt(gowers_power(a.values().data(), n, 1, none));
    }
    // Parallel over the outermost shift; per-shift results reduced in order.
    std::vector<double> per_shift(n);
    parallel_for(n, std::max(1u, opts.threads), [&](std::size_t t) {
        std::vector<std::vector<Complex>> scratch(s - 1, std::vector<Complex>(n));
        auto& b = scratch[s - 2];
        const auto& v = a.values();
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = i + t;
            if (j >= n) j -= n;
            b[i] = v[i] * std::conj(v[j]);
        }
        // Lower levels only touch scratch[0 .. s-3].
        per_shift[t] = gowers_power(b.data(), n, s - 1, scratch);
    });
    CompensatedSum acc;
    for (double x : per_shift) acc.add(x);
    const double power = acc.value() / static_cast<double>(n);
    return std::pow(std::max(0.0, power), 1.0 / std::ldexp(1.0, static_cast<int>(s)));
}

double gowers_u2_spectral(const CyclicSignal& a) {
    std::vector<Complex> buf = a.values();
    const FftPlan plan(buf.size());
    return std::pow(spectral_u2_power(buf, plan), 0.25);
}

double gowers_u3_via_u2(const CyclicSignal& a, const GowersOptions& opts) {
    const std::size_t n = a.values().size();
    if (n > 65536) {
        std::ostringstream msg;
        msg << "gowers_u3_via_u2: modulus " << n << " exceeds the cost guard 65536";
        throw CostGuardExceeded(msg.str());
    }
    const FftPlan plan(n);
    const auto& v = a.values();
    std::vector<double> per_shift(n);
    parallel_for(n, std::max(1u, opts.threads), [&](std::size_t t) {
        std::vector<Complex> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = i + t;
            if (j >= n) j -= n;
            b[i] = v[i] * std::conj(v[j]);
        }
        per_shift[t] = spectral_u2_power(b, plan);
    });
    CompensatedSum acc;
    for (double x : per_shift) acc.add(x);
    return std::pow(std::max(0.0, acc.value() / static_cast<double>(n)), 0.125);
}

double gowers_norm_fast(const CyclicSignal& a, unsigned s, const GowersOptions& opts) {
    switch (s) {
    case 0: throw InvalidArgument("gowers_norm_fast: s must be >= 1");
    case 1: return gowers_norm(a, 1, opts);
    case 2: return gowers_u2_spectral(a);
    case 3: return gowers_u3_via_u2(a, opts);
    default: return gowers_norm(a, s, opts);
    }
}

} // namespace multavg
