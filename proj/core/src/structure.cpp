#include "multavg/structure.hpp"

#include <algorithm>
#include <sstream>

#include "multavg/arith.hpp"
#include "multavg/errors.hpp"
#include "multavg/fft.hpp"

namespace multavg {

void validate(const KernelSpec& spec) {
    std::ostringstream msg;
    if (spec.Q < 1 || spec.V < 1)
        msg << "kernel spec needs Q, V >= 1 (got Q = " << spec.Q << ", V = " << spec.V << ")";
    else if (spec.N < 2 || !is_prime(static_cast<std::uint64_t>(spec.N)))
        msg << "kernel spec needs a prime modulus (got N = " << spec.N << ")";
    else if (spec.N <= 2 * spec.Q * spec.V)
        msg << "kernel spec needs N > 2QV (got N = " << spec.N << ", 2QV = " << 2 * spec.Q * spec.V << ")";
    else
        return;
    throw InvalidArgument(msg.str());
}

std::vector<std::int64_t> spectrum(const KernelSpec& spec) {
    validate(spec);
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(2 * spec.Q * spec.V));
    for (std::int64_t p = 0; p < spec.Q; ++p) {
        const auto center = static_cast<std::int64_t>(static_cast<int128>(p) * spec.N / spec.Q);
        for (std::int64_t j = -spec.V + 1; j <= spec.V; ++j) out.push_back(((center + j) % spec.N + spec.N) % spec.N);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double kernel_multiplier(const KernelSpec& spec, std::int64_t xi) {
    // ||Q xi / N|| * N = distance of Q xi to the nearest multiple of N.
    std::int64_t r = static_cast<std::int64_t>((static_cast<int128>(spec.Q) * xi) % spec.N);
    if (r < 0) r += spec.N;
    const std::int64_t dist = std::min(r, spec.N - r);
    const std::int64_t width = spec.Q * spec.V;
    if (dist >= width) return 0.0;
    return 1.0 - static_cast<double>(dist) / static_cast<double>(width);
}

Kernel build_kernel(const KernelSpec& spec) {
    const auto xi_set = spectrum(spec);
    std::vector<double> fourier(static_cast<std::size_t>(spec.N), 0.0);
    for (std::int64_t xi : xi_set) fourier[static_cast<std::size_t>(xi)] = kernel_multiplier(spec, xi);

    std::vector<Complex> hat(fourier.begin(), fourier.end());
    std::vector<Complex> values = inverse_fourier(hat);

    constexpr double kTol = 1e-9;
    CompensatedComplexSum mean;
    for (std::size_t n = 0; n < values.size(); ++n) {
        const Complex v = values[n];
        if (std::abs(v.imag()) > kTol || v.real() < -kTol) {
            std::ostringstream msg;
            msg << "kernel (Q=" << spec.Q << ", V=" << spec.V << ", N=" << spec.N << ") is not a non-negative real "
                << "function at residue " << n << ": value " << v.real() << " + " << v.imag() << "i";
            throw NumericFailure(msg.str(), std::max(std::abs(v.imag()), -v.real()));
        }
        mean.add(v);
    }
    const Complex avg = mean.value() / static_cast<double>(spec.N);
    if (std::abs(avg - 1.0) > kTol) {
        std::ostringstream msg;
        msg << "kernel mean is " << avg.real() << ", expected 1";
        throw NumericFailure(msg.str(), std::abs(avg - 1.0));
    }
    return Kernel(spec, std::move(fourier), std::move(values));
}

Decomposition decompose(const ValueView& f, const Kernel& kernel) {
    const KernelSpec& spec = kernel.spec();
    if (f.size() < spec.N) {
        std::ostringstream msg;
        msg << "decompose: table '" << f.name() << "' of length " << f.size() << " does not cover [1, " << spec.N
            << "]";
        throw RangeError(msg.str());
    }
    const auto N = static_cast<std::size_t>(spec.N);
    std::vector<Complex> buf(N);
    for (std::size_t n = 1; n <= N; ++n) buf[n % N] = f[static_cast<std::int64_t>(n)];

    const FftPlan plan(N);
    plan.forward(buf);
    const double scale = 1.0 / static_cast<double>(N);
    for (std::size_t xi = 0; xi < N; ++xi) buf[xi] *= kernel.fourier()[xi] * scale;
    plan.inverse(buf);

    Decomposition d;
    d.spec = spec;
    d.function = f.name();
    d.f.assign(N + 1, Complex{});
    d.f_st.assign(N + 1, Complex{});
    d.f_un.assign(N + 1, Complex{});
    for (std::size_t n = 1; n <= N; ++n) {
        d.f[n] = f[static_cast<std::int64_t>(n)];
        d.f_st[n] = buf[n % N];
        d.f_un[n] = d.f[n] - d.f_st[n];
    }
    return d;
}

Decomposition decompose(const ValueView& f, const KernelSpec& spec) { return decompose(f, build_kernel(spec)); }

ProbeResult uniformity_probe(const FormSystem& system, std::span<const ValueView> functions, std::int64_t N,
                             unsigned s, const AverageOptions& avg, const GowersOptions& gowers) {
    if (system.size() < 3) throw InvalidArgument("uniformity_probe: needs at least three forms");
    if (functions.size() != system.size())
        throw InvalidArgument("uniformity_probe: one function per form required");
    if (s < 1) throw InvalidArgument("uniformity_probe: s must be >= 1");
    for (std::size_t j = 1; j < system.size(); ++j) {
        if (!pairwise_independent(system[0], system[j])) {
            std::ostringstream msg;
            msg << "uniformity_probe: L_1 = " << format_form(system[0]) << " must be independent of L_" << j + 1
                << " = " << format_form(system[j]);
            throw InvalidArgument(msg.str());
        }
    }
    ProbeResult out;
    out.N = N;
    out.s = s;
    out.N_tilde = companion_prime(system, N, 1);
    out.average = multilinear_average(system, functions, N, avg);
    for (const auto& f : functions)
        out.gowers.push_back(gowers_norm_fast(CyclicSignal::embed(f, N, out.N_tilde), s, gowers));
    return out;
}

} // namespace multavg
