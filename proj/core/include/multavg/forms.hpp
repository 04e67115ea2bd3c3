#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace multavg {

/// Affine-linear form L(m) = k . m + a on N^d with k in N^d, k != 0.
class LinearForm {
public:
    LinearForm(std::vector<std::int64_t> coeffs, std::int64_t offset = 0);

    std::size_t dimension() const noexcept { return coeffs_.size(); }
    const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
    std::int64_t offset() const noexcept { return offset_; }
    std::int64_t coefficient_sum() const noexcept;

    /// k . m + a; throws InvalidArgument on a dimension mismatch.
    std::int64_t evaluate(std::span<const std::int64_t> m) const;

    /// Largest value on [N]^d (attained at m = (N,...,N)).
    std::int64_t max_on_box(std::int64_t N) const noexcept { return coefficient_sum() * N + offset_; }
    /// Smallest value on [N]^d (attained at m = (1,...,1)).
    std::int64_t min_on_box() const noexcept { return coefficient_sum() + offset_; }

    friend bool operator==(const LinearForm&, const LinearForm&) = default;

private:
    std::vector<std::int64_t> coeffs_;
    std::int64_t offset_;
};

/// True iff the linear parts are not rational multiples of each other.
/// Offsets are ignored. Decided exactly with integer cross products.
bool pairwise_independent(const LinearForm& f, const LinearForm& g);

/// Text syntax: "[k1,k2,...,kd]" optionally followed by "+ a" or "- a".
/// An optional "L =" prefix is accepted and ignored.
LinearForm parse_form(std::string_view text);
std::string format_form(const LinearForm& form);

/// A list of forms sharing one dimension d.
class FormSystem {
public:
    explicit FormSystem(std::vector<LinearForm> forms);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return forms_.size(); }
    const std::vector<LinearForm>& forms() const noexcept { return forms_; }
    const LinearForm& operator[](std::size_t j) const { return forms_.at(j); }

    /// Twice the sum of all coefficients of all forms (offsets excluded).
    std::int64_t kappa() const noexcept { return kappa_; }

    bool has_offsets() const noexcept;

    /// Index pairs (i, j), i < j, whose linear parts are proportional.
    std::vector<std::pair<std::size_t, std::size_t>> dependent_pairs() const;
    bool is_pairwise_independent() const { return dependent_pairs().empty(); }

    /// Largest value any form takes on [N]^d.
    std::int64_t max_value(std::int64_t N) const noexcept;

private:
    std::vector<LinearForm> forms_;
    std::size_t dimension_;
    std::int64_t kappa_;
};

/// Smallest prime P > kappa * N with P = 1 (mod Q). Throws RangeError if no
/// such prime exists below the search bound 10 * kappa * N * Q.
std::int64_t companion_prime(std::int64_t kappa, std::int64_t N, std::int64_t Q);
std::int64_t companion_prime(const FormSystem& system, std::int64_t N, std::int64_t Q);

} // namespace multavg
