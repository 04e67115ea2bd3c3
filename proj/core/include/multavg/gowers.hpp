#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multavg/averages.hpp"
#include "multavg/numeric.hpp"

namespace multavg {

/// A complex-valued function on Z_N, stored by residue 0..N-1.
class CyclicSignal {
public:
    explicit CyclicSignal(std::vector<Complex> values);

    /// f_N = f * 1_[N] placed on Z_modulus at residues n mod modulus,
    /// zero elsewhere. Requires 1 <= N <= modulus and N <= f.size().
    static CyclicSignal embed(const ValueView& f, std::int64_t N, std::int64_t modulus);
    /// Same with modulus = N (the interval [N] identified with Z_N).
    static CyclicSignal embed(const ValueView& f, std::int64_t N) { return embed(f, N, N); }

    std::int64_t modulus() const noexcept { return static_cast<std::int64_t>(values_.size()); }
    const std::vector<Complex>& values() const noexcept { return values_; }
    Complex operator[](std::int64_t r) const noexcept { return values_[static_cast<std::size_t>(r)]; }
    double sup_norm() const noexcept;

private:
    std::vector<Complex> values_;
};

struct GowersOptions {
    unsigned threads = 1;
    /// The recursive evaluation costs about N^s operations.
    double cost_limit = 1e9;
};

/// ||a||_{U^s(Z_N)} from the inductive definition
///   ||a||_{U^1} = |E_n a(n)|,
///   ||a||_{U^{s+1}}^{2^{s+1}} = E_t ||a * conj(a_t)||_{U^s}^{2^s},
/// carried on the 2^s-th powers with compensated summation. Throws
/// CostGuardExceeded when N^s exceeds the cost limit.
double gowers_norm(const CyclicSignal& a, unsigned s, const GowersOptions& opts = {});

/// ||a||_{U^2} from (sum_xi |a_hat(xi)|^4)^{1/4}, a_hat normalized by 1/N.
double gowers_u2_spectral(const CyclicSignal& a);

/// ||a||_{U^3} as (E_t ||a * conj(a_t)||_{U^2}^4)^{1/8} with the inner norm
/// evaluated spectrally. O(N^2 log N); N <= 65536.
double gowers_u3_via_u2(const CyclicSignal& a, const GowersOptions& opts = {});

/// Chooses the fastest exact path: s = 1 directly, s = 2 spectral, s = 3
/// through U^2, s >= 4 recursively.
double gowers_norm_fast(const CyclicSignal& a, unsigned s, const GowersOptions& opts = {});

} // namespace multavg
