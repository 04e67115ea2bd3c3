#include "multavg/fft.hpp"

#include <bit>
#include <cstdint>

#include "multavg/errors.hpp"

namespace multavg {

struct FftPlan::Radix2 {
    std::size_t n;
    unsigned log2n;
    std::vector<Complex> twiddle; // e(-k/n), k < n/2
    std::vector<std::uint32_t> reversal;

    explicit Radix2(std::size_t size) : n(size), log2n(static_cast<unsigned>(std::countr_zero(size))) {
        twiddle.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k)
            twiddle[k] = e_rational(-static_cast<std::int64_t>(k), static_cast<std::int64_t>(n));
        reversal.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t r = 0;
            for (unsigned b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= 1u << (log2n - 1 - b);
            reversal[i] = r;
        }
    }

    void run(std::span<Complex> a, bool inverse) const {
        for (std::size_t i = 0; i < n; ++i)
            if (i < reversal[i]) std::swap(a[i], a[reversal[i]]);
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t stride = n / len;
            for (std::size_t start = 0; start < n; start += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    Complex w = twiddle[k * stride];
                    if (inverse) w = std::conj(w);
                    const Complex u = a[start + k];
                    const Complex v = a[start + k + half] * w;
                    a[start + k] = u + v;
                    a[start + k + half] = u - v;
                }
            }
        }
    }
};

struct FftPlan::Bluestein {
    std::size_t n;
    std::size_t m;
    Radix2 inner;
    std::vector<Complex> chirp;      // e(-k^2 / 2n)
    std::vector<Complex> kernel_hat; // transform of conj(chirp) wrapped to length m

    explicit Bluestein(std::size_t size)
        : n(size), m(std::bit_ceil(2 * size - 1)), inner(m) {
        chirp.resize(n);
        const auto two_n = static_cast<std::int64_t>(2 * n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto kk = static_cast<std::int64_t>((static_cast<uint128>(k) * k) % (2 * n));
            chirp[k] = e_rational(-kk, two_n);
        }
        kernel_hat.assign(m, Complex{});
        kernel_hat[0] = std::conj(chirp[0]);
        for (std::size_t k = 1; k < n; ++k) {
            kernel_hat[k] = std::conj(chirp[k]);
            kernel_hat[m - k] = std::conj(chirp[k]);
        }
        inner.run(kernel_hat, false);
    }

    void run(std::span<Complex> a, bool inverse) const {
        std::vector<Complex> buf(m);
        for (std::size_t k = 0; k < n; ++k) {
            const Complex c = inverse ? std::conj(chirp[k]) : chirp[k];
            buf[k] = a[k] * c;
        }
        inner.run(buf, false);
        for (std::size_t k = 0; k < m; ++k)
            buf[k] *= inverse ? std::conj(kernel_hat[(m - k) % m]) : kernel_hat[k];
        inner.run(buf, true);
        const double scale = 1.0 / static_cast<double>(m);
        for (std::size_t k = 0; k < n; ++k) {
            const Complex c = inverse ? std::conj(chirp[k]) : chirp[k];
            a[k] = buf[k] * scale * c;
        }
    }
};

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidArgument("FftPlan: length must be positive");
    if (std::has_single_bit(n))
        radix2_ = std::make_unique<Radix2>(n);
    else
        bluestein_ = std::make_unique<Bluestein>(n);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::transform(std::span<Complex> data, bool inverse) const {
    if (data.size() != n_) throw InvalidArgument("FftPlan: length mismatch");
    if (radix2_)
        radix2_->run(data, inverse);
    else
        bluestein_->run(data, inverse);
}

void FftPlan::forward(std::span<Complex> data) const { transform(data, false); }
void FftPlan::inverse(std::span<Complex> data) const { transform(data, true); }

std::vector<Complex> fourier_coefficients(std::span<const Complex> a) {
    std::vector<Complex> out(a.begin(), a.end());
    FftPlan(out.size()).forward(out);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& z : out) z *= scale;
    return out;
}

std::vector<Complex> inverse_fourier(std::span<const Complex> a_hat) {
    std::vector<Complex> out(a_hat.begin(), a_hat.end());
    FftPlan(out.size()).inverse(out);
    return out;
}

} // namespace multavg
