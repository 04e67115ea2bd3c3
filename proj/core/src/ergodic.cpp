#include "multavg/ergodic.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "multavg/errors.hpp"
#include "multavg/parallel.hpp"

namespace multavg {
namespace {

double wrap_unit(double x) {
    x -= std::floor(x);
    return x >= 1.0 ? 0.0 : x;
}

} // namespace

double LogRotationAction::apply(std::int64_t n, double x) const {
    if (n < 1) throw DomainViolation("LogRotationAction: n must be positive");
    return wrap_unit(x + c * std::log(static_cast<double>(n)));
}

double LogRotationAction::apply_rational(std::int64_t a, std::int64_t b, double x) const {
    if (a < 1 || b < 1) throw DomainViolation("LogRotationAction: a/b must be a positive rational");
    return wrap_unit(x + c * (std::log(static_cast<double>(a)) - std::log(static_cast<double>(b))));
}

Complex TrigObservable::operator()(double x) const {
    Complex s{};
    for (const auto& [k, ck] : terms) s += ck * e(wrap_unit(static_cast<double>(k) * x));
    return s;
}

double TrigObservable::sup_bound() const {
    double s = 0.0;
    for (const auto& term : terms) s += std::abs(term.second);
    return s;
}

TrigObservable TrigObservable::conjugate() const {
    TrigObservable out;
    for (const auto& [k, ck] : terms) out.terms.emplace_back(-k, std::conj(ck));
    return out;
}

ErgodicResult ergodic_average(const LogRotationAction& action, const TrigObservable& F, const TrigObservable& G,
                              std::span<const std::pair<LinearForm, LinearForm>> pairs, std::int64_t N,
                              const ErgodicOptions& opts) {
    if (N < 1) throw InvalidArgument("ergodic_average: N must be >= 1");
    std::vector<LinearForm> all;
    for (const auto& p : pairs) all.push_back(p.first);
    for (const auto& p : pairs) all.push_back(p.second);

    ErgodicResult out;
    std::size_t d = 0;
    if (!all.empty()) {
        const FormSystem system(all);
        out.dependent_pairs = system.dependent_pairs();
        d = system.dimension();
        if (d > 2) throw CostGuardExceeded("ergodic_average: dimension must be <= 2");
        for (const auto& f : all)
            if (f.min_on_box() < 1) throw InvalidArgument("ergodic_average: forms must be positive on [N]^d");
    }

    // Collect the frequency pairs with k + j = 0.
    std::map<std::int64_t, Complex> g_terms;
    for (const auto& [j, dj] : G.terms) g_terms[j] += dj;
    std::map<std::int64_t, Complex> weights;
    for (const auto& [k, ck] : F.terms) {
        const auto it = g_terms.find(-k);
        if (it != g_terms.end()) weights[k] += ck * it->second;
    }
    if (weights.empty()) return out;

    // Every term reduces to the average of exp(2 pi i k c (log A - log B)).
    std::vector<double> rates;
    std::vector<Complex> coeffs;
    for (const auto& [k, w] : weights) {
        if (k == 0 || pairs.empty()) {
            out.value += w;
            continue;
        }
        rates.push_back(kTwoPi * static_cast<double>(k) * action.c);
        coeffs.push_back(w);
    }
    if (rates.empty()) return out;

    std::int64_t max_value = 1;
    for (const auto& f : all) max_value = std::max(max_value, f.max_on_box(N));
    std::vector<double> logs(static_cast<std::size_t>(max_value) + 1, 0.0);
    for (std::int64_t n = 1; n <= max_value; ++n) logs[static_cast<std::size_t>(n)] = std::log(static_cast<double>(n));

    const std::size_t l = pairs.size();
    auto log_ratio = [&](std::span<const std::int64_t> m) {
        double s = 0.0;
        for (std::size_t j = 0; j < l; ++j) {
            s += logs[static_cast<std::size_t>(pairs[j].first.evaluate(m))];
            s -= logs[static_cast<std::size_t>(pairs[j].second.evaluate(m))];
        }
        return s;
    };

    const std::int64_t block = std::max<std::int64_t>(1, opts.block_rows);
    const std::int64_t outer = d == 0 ? 1 : N;
    const auto blocks = static_cast<std::size_t>((outer + block - 1) / block);
    std::vector<std::vector<CompensatedComplexSum>> partial(blocks, std::vector<CompensatedComplexSum>(rates.size()));
    parallel_for(blocks, opts.threads, [&](std::size_t b) {
        const std::int64_t lo = static_cast<std::int64_t>(b) * block + 1;
        const std::int64_t hi = std::min(outer, lo + block - 1);
        auto& acc = partial[b];
        std::int64_t m[2] = {0, 0};
        auto visit = [&] {
            const double r = log_ratio(std::span<const std::int64_t>(m, d));
            for (std::size_t q = 0; q < rates.size(); ++q) acc[q].add(std::polar(1.0, rates[q] * r));
        };
        for (std::int64_t m0 = lo; m0 <= hi; ++m0) {
            m[0] = m0;
            if (d == 2) {
                for (std::int64_t m1 = 1; m1 <= N; ++m1) {
                    m[1] = m1;
                    visit();
                }
            } else {
                visit();
            }
        }
    });
    double volume = 1.0;
    for (std::size_t i = 0; i < d; ++i) volume *= static_cast<double>(N);
    for (std::size_t q = 0; q < rates.size(); ++q) {
        CompensatedComplexSum total;
        for (const auto& p : partial) total.add(p[q].value());
        out.value += coeffs[q] * total.value() / volume;
    }
    return out;
}

std::vector<CounterexampleRow> counterexample_trace(std::span<const std::int64_t> checkpoints, double c) {
    std::vector<CounterexampleRow> rows;
    if (checkpoints.empty()) return rows;
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
            throw InvalidArgument("counterexample_trace: checkpoints must be positive and strictly ascending");
    const double rate = kTwoPi * c;
    CompensatedComplexSum sum;
    std::int64_t n = 0;
    for (std::int64_t N : checkpoints) {
        for (++n; n <= N; ++n) sum.add(std::polar(1.0, rate * std::log(static_cast<double>(n))));
        --n;
        CounterexampleRow row;
        row.N = N;
        row.value = sum.value() / static_cast<double>(N);
        row.modulus = std::abs(row.value);
        row.argument = std::arg(row.value);
        row.asymptotic = std::polar(1.0, rate * std::log(static_cast<double>(N))) / Complex(1.0, rate);
        rows.push_back(row);
    }
    return rows;
}

} // namespace multavg
