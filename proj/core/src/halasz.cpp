#include "multavg/halasz.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "multavg/errors.hpp"
#include "multavg/parallel.hpp"

namespace multavg {
namespace {

void require_cutoff(const SieveTable& f, std::int64_t P, const char* what) {
    if (P > f.size()) {
        std::ostringstream msg;
        msg << what << ": prime cutoff " << P << " exceeds the sieve length " << f.size() << " of '" << f.name()
            << "'";
        throw RangeError(msg.str());
    }
}

Complex twisted_prime_value(const SieveTable& f, const DirichletCharacter& chi, double t, std::int64_t p) {
    return chi(p) * f[p] * std::polar(1.0, -t * std::log(static_cast<double>(p)));
}

} // namespace

double pretentious_distance_sq(const SieveTable& f, const DirichletCharacter& chi, double t, std::int64_t P) {
    require_cutoff(f, P, "pretentious_distance_sq");
    double sum = 0.0;
    for (std::int64_t p : primes_up_to(P)) {
        const double term = 1.0 - twisted_prime_value(f, chi, t, p).real();
        sum += std::max(0.0, term) / static_cast<double>(p);
    }
    return sum;
}

double w_eval(const SieveTable& f, const DirichletCharacter& chi, double t, std::int64_t N) {
    require_cutoff(f, N, "w_eval");
    double sum = 0.0;
    for (std::int64_t p : primes_up_to(N)) sum += twisted_prime_value(f, chi, t, p).imag() / static_cast<double>(p);
    return sum;
}

Sequence w_sequence(const SieveTable& f, const DirichletCharacter& chi, double t) {
    struct PrefixData {
        std::vector<std::int64_t> primes;
        std::vector<double> prefix; // prefix[k] = sum over the first k primes
    };
    auto data = std::make_shared<PrefixData>();
    data->primes = primes_up_to(f.size());
    data->prefix.reserve(data->primes.size() + 1);
    data->prefix.push_back(0.0);
    double sum = 0.0;
    for (std::int64_t p : data->primes) {
        sum += twisted_prime_value(f, chi, t, p).imag() / static_cast<double>(p);
        data->prefix.push_back(sum);
    }
    return Sequence(
        [data](std::int64_t n) {
            const auto it = std::upper_bound(data->primes.begin(), data->primes.end(), n);
            return data->prefix[static_cast<std::size_t>(it - data->primes.begin())];
        },
        f.size());
}

DirichletCharacter conjugate(const DirichletCharacter& chi) {
    const auto comps = character_components(chi.modulus());
    std::uint64_t rest = chi.index();
    std::uint64_t index = 0;
    std::uint64_t radix = 1;
    for (const auto& c : comps) {
        const std::uint64_t digit = rest % c.order;
        rest /= c.order;
        index += ((c.order - digit) % c.order) * radix;
        radix *= c.order;
    }
    std::vector<Complex> table(chi.table().begin(), chi.table().end());
    for (auto& z : table) z = std::conj(z);
    return DirichletCharacter(chi.modulus(), index, std::move(table));
}

HalaszParams HalaszParams::trivial() { return HalaszParams{}; }

HalaszParams HalaszParams::manual(double t, Sequence w) {
    HalaszParams p;
    p.t = t;
    p.w = std::move(w);
    return p;
}

HalaszParams fit_halasz_params(const SieveTable& f, const FitGrid& grid) {
    if (!(grid.t_step > 0.0)) throw InvalidArgument("fit_halasz_params: t_step must be positive");
    if (grid.q_max < 1) throw InvalidArgument("fit_halasz_params: q_max must be >= 1");
    if (!(grid.t_max >= grid.t_min)) throw InvalidArgument("fit_halasz_params: empty t grid");
    const std::int64_t P = grid.prime_cutoff == 0 ? f.size() : grid.prime_cutoff;
    require_cutoff(f, P, "fit_halasz_params");

    const auto steps = static_cast<std::size_t>(std::floor((grid.t_max - grid.t_min) / grid.t_step + 1e-9)) + 1;
    std::vector<double> ts(steps);
    for (std::size_t k = 0; k < steps; ++k) ts[k] = grid.t_min + static_cast<double>(k) * grid.t_step;

    std::vector<DirichletCharacter> chars;
    for (std::uint64_t q = 1; q <= grid.q_max; ++q)
        for (std::uint64_t i = 0, phi = euler_phi(q); i < phi; ++i) chars.push_back(dirichlet_character(q, i));

    const std::vector<std::int64_t> primes = primes_up_to(P);
    std::vector<double> log_p(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) log_p[i] = std::log(static_cast<double>(primes[i]));

    // distances[k * chars + c]
    std::vector<double> distances(steps * chars.size());
    parallel_for(steps, std::max(1u, grid.threads), [&](std::size_t k) {
        std::vector<Complex> z(primes.size());
        for (std::size_t i = 0; i < primes.size(); ++i) z[i] = f[primes[i]] * std::polar(1.0, -ts[k] * log_p[i]);
        for (std::size_t c = 0; c < chars.size(); ++c) {
            double sum = 0.0;
            for (std::size_t i = 0; i < primes.size(); ++i) {
                const double term = 1.0 - (chars[c](primes[i]) * z[i]).real();
                sum += std::max(0.0, term) / static_cast<double>(primes[i]);
            }
            distances[k * chars.size() + c] = sum;
        }
    });

    constexpr double kTie = 1e-12;
    std::size_t best_k = 0;
    std::size_t best_c = 0;
    auto key_less = [&](std::size_t k1, std::size_t c1, std::size_t k2, std::size_t c2) {
        const double a1 = std::abs(ts[k1]);
        const double a2 = std::abs(ts[k2]);
        if (a1 != a2) return a1 < a2;
        if (chars[c1].modulus() != chars[c2].modulus()) return chars[c1].modulus() < chars[c2].modulus();
        if (chars[c1].index() != chars[c2].index()) return chars[c1].index() < chars[c2].index();
        return ts[k1] < ts[k2];
    };
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t c = 0; c < chars.size(); ++c) {
            const double d = distances[k * chars.size() + c];
            const double best = distances[best_k * chars.size() + best_c];
            if (d < best - kTie || (std::abs(d - best) <= kTie && key_less(k, c, best_k, best_c))) {
                best_k = k;
                best_c = c;
            }
        }
    }

    HalaszParams out;
    out.t = ts[best_k];
    out.chi = chars[best_c];
    out.distance_sq_at_fit = distances[best_k * chars.size() + best_c];
    out.fitted_over = grid;
    out.fitted_over.prime_cutoff = P;
    out.w = w_sequence(f, out.chi, out.t);
    return out;
}

MeanSeries mean_series(const SieveTable& f, std::int64_t a, std::int64_t b, const HalaszParams& params,
                       std::span<const std::int64_t> checkpoints) {
    if (a < 1 || b < 0) throw InvalidArgument("mean_series: need a >= 1 and b >= 0");
    if (checkpoints.empty()) throw InvalidArgument("mean_series: no checkpoints");
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
            throw InvalidArgument("mean_series: checkpoints must be positive and strictly ascending");
    const std::int64_t n_max = checkpoints.back();
    if (a * n_max + b > f.size()) {
        std::ostringstream msg;
        msg << "mean_series: a*N + b = " << a * n_max + b << " exceeds the sieve length " << f.size();
        throw RangeError(msg.str());
    }

    MeanSeries out;
    out.function = f.name();
    out.a = a;
    out.b = b;
    CompensatedComplexSum sum;
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        sum.add(f[a * n + b]);
        if (n == checkpoints[next]) {
            const Complex raw = sum.value() / static_cast<double>(n);
            out.entries.push_back({n, raw, raw * renormalization_factor(n, params.t, params.w)});
            ++next;
        }
    }
    std::vector<Complex> renorm;
    for (const auto& e : out.entries) renorm.push_back(e.renormalized);
    out.c_estimate = renorm.back();
    out.stabilization = diagnose_stabilization(checkpoints, renorm);
    return out;
}

std::vector<SlowVariationRow> slowly_varying_check(const Sequence& w, std::span<const std::int64_t> xs) {
    std::vector<SlowVariationRow> rows;
    for (std::int64_t x : xs) {
        if (x < 1) throw InvalidArgument("slowly_varying_check: x must be >= 1");
        if (x > 3'037'000'499 || x * x > w.limit()) {
            std::ostringstream msg;
            msg << "slowly_varying_check: x^2 = " << x << "^2 exceeds the sequence range " << w.limit();
            throw RangeError(msg.str());
        }
        const double wx = w(x);
        double best = 0.0;
        for (std::int64_t n = x; n <= x * x; ++n) best = std::max(best, std::abs(w(n) - wx));
        rows.push_back({x, best});
    }
    return rows;
}

} // namespace multavg
