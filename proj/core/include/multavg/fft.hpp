#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "multavg/numeric.hpp"

namespace multavg {

/// Discrete Fourier transform of arbitrary length.
///
/// forward:  X[k] = sum_n x[n] e(-nk/N)
/// inverse:  x[n] = sum_k X[k] e(+nk/N)      (no 1/N scaling)
///
/// Powers of two use an iterative radix-2 transform; other lengths go
/// through Bluestein's chirp-z reduction to a power-of-two convolution.
/// Plans are immutable after construction and may be shared across threads.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);
    ~FftPlan();
    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;

    std::size_t size() const noexcept { return n_; }

    void forward(std::span<Complex> data) const;
    void inverse(std::span<Complex> data) const;

private:
    struct Radix2;
    struct Bluestein;

    void transform(std::span<Complex> data, bool inverse) const;

    std::size_t n_;
    std::unique_ptr<Radix2> radix2_;
    std::unique_ptr<Bluestein> bluestein_;
};

/// Normalized Fourier coefficients on Z_N: a_hat(xi) = (1/N) sum_n a(n) e(-n xi / N).
std::vector<Complex> fourier_coefficients(std::span<const Complex> a);

/// Inverse of fourier_coefficients: a(n) = sum_xi a_hat(xi) e(n xi / N).
std::vector<Complex> inverse_fourier(std::span<const Complex> a_hat);

} // namespace multavg
