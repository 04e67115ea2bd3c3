#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "multavg/averages.hpp"
#include "multavg/forms.hpp"
#include "multavg/gowers.hpp"

namespace multavg {

/// Parameters (Q, V) of the kernel together with the prime modulus N.
struct KernelSpec {
    std::int64_t Q = 1;
    std::int64_t V = 1;
    std::int64_t N = 5;
};

/// Throws InvalidArgument unless Q, V >= 1, N is prime and N > 2QV.
void validate(const KernelSpec& spec);

/// The spectrum as the union over p = 0..Q-1 of the blocks
/// { floor(pN/Q) + j mod N : -V < j <= V }, sorted ascending. It has exactly
/// 2QV elements.
std::vector<std::int64_t> spectrum(const KernelSpec& spec);

/// phi_hat(xi) = 1 - ||Q xi / N|| * N / (QV) on the spectrum, 0 elsewhere.
double kernel_multiplier(const KernelSpec& spec, std::int64_t xi);

class Kernel {
public:
    Kernel(KernelSpec spec, std::vector<double> fourier, std::vector<Complex> values)
        : spec_(spec), fourier_(std::move(fourier)), values_(std::move(values)) {}

    const KernelSpec& spec() const noexcept { return spec_; }
    /// phi_hat by frequency 0..N-1.
    const std::vector<double>& fourier() const noexcept { return fourier_; }
    /// phi by residue 0..N-1.
    const std::vector<Complex>& values() const noexcept { return values_; }

private:
    KernelSpec spec_;
    std::vector<double> fourier_;
    std::vector<Complex> values_;
};

/// Builds phi and checks at build time that it is real and non-negative to
/// 1e-9 and has mean 1; a violation raises NumericFailure naming the residue.
Kernel build_kernel(const KernelSpec& spec);

/// f_N = f_st + f_un on [N], with f_st = f_N * phi (normalized convolution
/// on Z_N). Arrays are stored by n in [1, N] with element 0 unused.
struct Decomposition {
    KernelSpec spec;
    std::string function;
    std::vector<Complex> f;
    std::vector<Complex> f_st;
    std::vector<Complex> f_un;

    ValueView structured() const { return ValueView(f_st, "st(" + function + ")", false); }
    ValueView uniform() const { return ValueView(f_un, "un(" + function + ")", false); }
};

Decomposition decompose(const ValueView& f, const Kernel& kernel);
Decomposition decompose(const ValueView& f, const KernelSpec& spec);

struct ProbeResult {
    std::int64_t N = 0;
    std::int64_t N_tilde = 0;
    unsigned s = 0;
    Complex average;
    /// ||f_j * 1_[N]||_{U^s(Z_Ntilde)} per function, zero-padded embedding.
    std::vector<double> gowers;
};

/// Computes A_N and the U^s(Z_Ntilde) norms of every function for the
/// uniformity-estimate study. Requires l >= 3 and L_1 independent of each
/// L_j, j >= 2. Ntilde is the companion prime with Q = 1.
ProbeResult uniformity_probe(const FormSystem& system, std::span<const ValueView> functions, std::int64_t N,
                             unsigned s, const AverageOptions& avg = {}, const GowersOptions& gowers = {});

} // namespace multavg
