#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "multavg/arith.hpp"
#include "multavg/forms.hpp"
#include "multavg/halasz.hpp"
#include "multavg/quadrature.hpp"

namespace multavg {

/// Non-owning view of a function's values on [1, size()], stored by index
/// n with element 0 unused.
class ValueView {
public:
    ValueView(std::span<const Complex> indexed, std::string name, bool real_valued)
        : values_(indexed), name_(std::move(name)), real_(real_valued) {}
    ValueView(const SieveTable& table) // NOLINT(google-explicit-constructor)
        : values_(table.indexed()), name_(table.name()), real_(table.is_real_valued()) {}

    std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()) - 1; }
    Complex operator[](std::int64_t n) const noexcept { return values_[static_cast<std::size_t>(n)]; }
    std::span<const Complex> indexed() const noexcept { return values_; }
    const std::string& name() const noexcept { return name_; }
    bool is_real_valued() const noexcept { return real_; }

private:
    std::span<const Complex> values_;
    std::string name_;
    bool real_;
};

struct AverageOptions {
    unsigned threads = 1;
    /// Rows of the first coordinate per work block. Results are bitwise
    /// reproducible for a fixed block size, independent of the thread count.
    std::int64_t block_rows = 64;
    /// Factor the sum when the forms split into groups with disjoint variables.
    bool separable_fast_path = true;
};

/// Largest dimension the direct summation accepts.
inline constexpr std::size_t kMaxAverageDimension = 3;

/// (1/N^d) sum over m in [N]^d of prod_j f_j(L_j(m)).
/// Factors are multiplied in a canonical order (sorted by form, then by
/// function), so permuting the (f_j, L_j) pairs leaves the result unchanged.
Complex multilinear_average(const FormSystem& system, std::span<const ValueView> functions, std::int64_t N,
                            const AverageOptions& opts = {});

/// Variable groups: forms (by index) partitioned so that no two groups share
/// a variable. Unused variables are not listed.
std::vector<std::vector<std::size_t>> separable_groups(const FormSystem& system);

struct AverageSeries {
    std::vector<std::string> functions;
    std::vector<std::int64_t> checkpoints;
    std::vector<Complex> raw;
    std::vector<Complex> renormalized;
    double t = 0.0;
    Sequence w = Sequence::zero();
    Stabilization stabilization;
    /// Pairs of forms whose linear parts are proportional (diagnostic).
    std::vector<std::pair<std::size_t, std::size_t>> dependent_pairs;
};

/// Raw and renormalized averages along the checkpoints, with t = sum t_j and
/// w = sum w_j taken from the per-function parameters. Throws InvalidArgument
/// when dependent forms carry non-zero offsets.
AverageSeries renormalized_series(const FormSystem& system, std::span<const ValueView> functions,
                                  std::span<const HalaszParams> params, std::span<const std::int64_t> checkpoints,
                                  const AverageOptions& opts = {});

struct ConjugatePairResult {
    Complex value;
    /// Pairs (i, j) among the 2l forms L_1..L_l, L'_1..L'_l that are dependent.
    std::vector<std::pair<std::size_t, std::size_t>> dependent_pairs;
};

/// (1/N^d) sum over m of prod_j f_j(L_j(m)) conj(f_j(L'_j(m))).
ConjugatePairResult conjugate_pair_average(std::span<const std::pair<LinearForm, LinearForm>> pairs,
                                           std::span<const ValueView> functions, std::int64_t N,
                                           const AverageOptions& opts = {});

/// Integral over [0,1]^d of prod_j L_j(x)^{i t_j}; forms must have zero offsets.
QuadratureResult archimedean_limit(const FormSystem& system, std::span<const double> t_list,
                                   double abs_tol = 1e-6);

} // namespace multavg
