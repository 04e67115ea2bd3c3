#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "multavg/arith.hpp"
#include "multavg/series.hpp"

namespace multavg {

/// Sum over primes p <= P of (1 - Re(chi(p) f(p) p^{-it})) / p, summed in
/// ascending order of p. Throws RangeError when P exceeds the table.
double pretentious_distance_sq(const SieveTable& f, const DirichletCharacter& chi, double t, std::int64_t P);

/// Sum over primes p <= N of Im(chi(p) f(p) p^{-it}) / p.
double w_eval(const SieveTable& f, const DirichletCharacter& chi, double t, std::int64_t N);

/// The sequence N -> w_eval(f, chi, t, N) on [1, f.size()], backed by a
/// prefix array over primes (O(log) per query).
Sequence w_sequence(const SieveTable& f, const DirichletCharacter& chi, double t);

/// Conjugate character (conjugated table, index of the conjugate digits).
DirichletCharacter conjugate(const DirichletCharacter& chi);

struct FitGrid {
    double t_min = -4.0;
    double t_max = 4.0;
    double t_step = 1e-2;
    std::uint64_t q_max = 12;
    /// Prime cutoff; 0 means the table length.
    std::int64_t prime_cutoff = 0;
    unsigned threads = 1;
};

struct HalaszParams {
    double t = 0.0;
    DirichletCharacter chi = dirichlet_character(1, 0);
    Sequence w = Sequence::zero();
    double distance_sq_at_fit = 0.0;
    FitGrid fitted_over{};

    /// t = 0, principal character mod 1, w = 0.
    static HalaszParams trivial();
    /// Hand-set (t, w) with the principal character mod 1.
    static HalaszParams manual(double t, Sequence w);
};

/// Grid scan over t in [t_min, t_max] (step t_step) and every character of
/// modulus <= q_max, minimizing the pretentious distance. Ties (within
/// 1e-12) go to the smallest |t|, then the smallest modulus, then the
/// smallest index.
HalaszParams fit_halasz_params(const SieveTable& f, const FitGrid& grid = {});

struct MeanEntry {
    std::int64_t N = 0;
    Complex raw;
    Complex renormalized;
};

struct MeanSeries {
    std::string function;
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::vector<MeanEntry> entries;
    /// Renormalized mean at the largest checkpoint (estimate of c_{f,a,b}).
    Complex c_estimate;
    Stabilization stabilization;
};

/// raw(N) = (1/N) sum_{n<=N} f(an + b); renormalized = N^{-it} exp(-i w(N)) raw.
/// Checkpoints must be strictly ascending; a*N_max + b must fit the table.
MeanSeries mean_series(const SieveTable& f, std::int64_t a, std::int64_t b, const HalaszParams& params,
                       std::span<const std::int64_t> checkpoints);

struct SlowVariationRow {
    std::int64_t x = 0;
    double max_deviation = 0.0; // max over x <= n <= x^2 of |w(n) - w(x)|
};

std::vector<SlowVariationRow> slowly_varying_check(const Sequence& w, std::span<const std::int64_t> xs);

} // namespace multavg
