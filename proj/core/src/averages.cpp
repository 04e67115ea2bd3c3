#include "multavg/averages.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

#include "multavg/errors.hpp"
#include "multavg/parallel.hpp"

namespace multavg {
namespace {

struct Factor {
    std::vector<std::int64_t> coeffs; // restricted to the active variables
    std::int64_t offset;
    const ValueView* values;
    bool conjugate;
};

void check_coverage(const LinearForm& form, const ValueView& f, std::int64_t N) {
    if (form.min_on_box() < 1) {
        std::ostringstream msg;
        msg << "form " << format_form(form) << " takes the value " << form.min_on_box()
            << " < 1 on [N]^d; multiplicative functions live on positive integers";
        throw InvalidArgument(msg.str());
    }
    if (form.max_on_box(N) > f.size()) {
        std::ostringstream msg;
        msg << "table '" << f.name() << "' of length " << f.size() << " is too short for form " << format_form(form)
            << " at N = " << N << " (needs " << form.max_on_box(N) << ")";
        throw RangeError(msg.str());
    }
}

// Direct summation over [N]^dim, blocked on the first coordinate.
Complex sum_box(const std::vector<Factor>& factors, std::size_t dim, std::int64_t N, const AverageOptions& opts) {
    const bool real = std::all_of(factors.begin(), factors.end(),
                                  [](const Factor& f) { return f.values->is_real_valued(); });
    const std::int64_t block = std::max<std::int64_t>(1, opts.block_rows);
    const auto blocks = static_cast<std::size_t>((N + block - 1) / block);
    std::vector<Complex> partial(blocks);
    const std::size_t nf = factors.size();
    const std::size_t last = dim - 1;

    parallel_for(blocks, std::max(1u, opts.threads), [&](std::size_t b) {
        const std::int64_t lo = 1 + static_cast<std::int64_t>(b) * block;
        const std::int64_t hi = std::min(N, lo + block - 1);
        std::vector<std::int64_t> base(nf);
        std::vector<std::int64_t> step(nf);
        std::vector<const Complex*> data(nf);
        for (std::size_t j = 0; j < nf; ++j) {
            step[j] = factors[j].coeffs[last];
            data[j] = factors[j].values->indexed().data();
        }
        CompensatedComplexSum acc;
        std::int64_t mid_count = dim >= 3 ? N : 1;

        for (std::int64_t m1 = lo; m1 <= hi; ++m1) {
            for (std::int64_t m2 = 1; m2 <= mid_count; ++m2) {
                // Base index of every factor for this line of the last coordinate.
                for (std::size_t j = 0; j < nf; ++j) {
                    const auto& c = factors[j].coeffs;
                    std::int64_t v = factors[j].offset;
                    if (dim >= 2) v += c[0] * m1;
                    if (dim >= 3) v += c[1] * m2;
                    base[j] = v;
                }
                if (dim == 1) {
                    // m1 itself is the summation variable.
                    Complex prod{1.0, 0.0};
                    for (std::size_t j = 0; j < nf; ++j) {
                        const Complex z = data[j][base[j] + step[j] * m1];
                        prod *= factors[j].conjugate ? std::conj(z) : z;
                    }
                    acc.add(prod);
                    continue;
                }
                if (real) {
                    double line = 0.0;
                    for (std::int64_t m = 1; m <= N; ++m) {
                        double prod = 1.0;
                        for (std::size_t j = 0; j < nf; ++j) prod *= data[j][base[j] + step[j] * m].real();
                        line += prod;
                    }
                    acc.add({line, 0.0});
                } else {
                    Complex line{};
                    for (std::int64_t m = 1; m <= N; ++m) {
                        Complex prod{1.0, 0.0};
                        for (std::size_t j = 0; j < nf; ++j) {
                            const Complex z = data[j][base[j] + step[j] * m];
                            prod *= factors[j].conjugate ? std::conj(z) : z;
                        }
                        line += prod;
                    }
                    acc.add(line);
                }
            }
        }
        partial[b] = acc.value();
    });

    CompensatedComplexSum total;
    for (const Complex& z : partial) total.add(z);
    return total.value();
}

Complex average_factors(const std::vector<LinearForm>& forms, std::span<const ValueView> functions,
                        std::span<const char> conjugate, std::int64_t N, const AverageOptions& opts) {
    if (N < 1) throw InvalidArgument("averages: N must be >= 1");
    if (forms.size() != functions.size())
        throw InvalidArgument("averages: number of functions does not match number of forms");
    const std::size_t d = forms.front().dimension();
    if (d > kMaxAverageDimension) {
        std::ostringstream msg;
        msg << "averages: dimension " << d << " exceeds the cost guard d <= " << kMaxAverageDimension;
        throw CostGuardExceeded(msg.str());
    }
    for (std::size_t j = 0; j < forms.size(); ++j) check_coverage(forms[j], functions[j], N);

    // Canonical factor order.
    std::vector<std::size_t> order(forms.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](std::size_t j) {
        return std::make_tuple(forms[j].coeffs(), forms[j].offset(), conjugate[j], functions[j].name(),
                               functions[j].indexed().data());
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    // Variable groups.
    std::vector<std::vector<std::size_t>> groups;
    if (opts.separable_fast_path) {
        groups = separable_groups(FormSystem(forms));
    } else {
        groups.emplace_back(forms.size());
        std::iota(groups.back().begin(), groups.back().end(), 0);
    }

    Complex result{1.0, 0.0};
    for (const auto& group : groups) {
        std::vector<bool> in_group(forms.size(), false);
        for (auto j : group) in_group[j] = true;
        std::vector<std::size_t> vars;
        for (std::size_t i = 0; i < d; ++i) {
            bool used = !opts.separable_fast_path;
            for (auto j : group) used = used || forms[j].coeffs()[i] != 0;
            if (used) vars.push_back(i);
        }
        std::vector<Factor> factors;
        for (auto j : order) {
            if (!in_group[j]) continue;
            Factor f;
            for (auto i : vars) f.coeffs.push_back(forms[j].coeffs()[i]);
            f.offset = forms[j].offset();
            f.values = &functions[j];
            f.conjugate = conjugate[j] != 0;
            factors.push_back(std::move(f));
        }
        double volume = 1.0;
        for (std::size_t i = 0; i < vars.size(); ++i) volume *= static_cast<double>(N);
        result *= sum_box(factors, vars.size(), N, opts) / volume;
    }
    return result;
}

} // namespace

std::vector<std::vector<std::size_t>> separable_groups(const FormSystem& system) {
    const std::size_t n = system.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < system.dimension(); ++i) {
        std::size_t first = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (system[j].coeffs()[i] == 0) continue;
            if (first == n)
                first = j;
            else
                parent[find(j)] = find(first);
        }
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t r = find(j);
        if (slot[r] == n) {
            slot[r] = groups.size();
            groups.emplace_back();
        }
        groups[slot[r]].push_back(j);
    }
    return groups;
}

Complex multilinear_average(const FormSystem& system, std::span<const ValueView> functions, std::int64_t N,
                            const AverageOptions& opts) {
    const std::vector<char> plain(system.size(), 0);
    return average_factors(system.forms(), functions, plain, N, opts);
}

AverageSeries renormalized_series(const FormSystem& system, std::span<const ValueView> functions,
                                  std::span<const HalaszParams> params, std::span<const std::int64_t> checkpoints,
                                  const AverageOptions& opts) {
    if (params.size() != functions.size())
        throw InvalidArgument("renormalized_series: one parameter set per function required");
    if (checkpoints.empty()) throw InvalidArgument("renormalized_series: no checkpoints");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw InvalidArgument("renormalized_series: checkpoints must be strictly ascending");

    AverageSeries out;
    out.dependent_pairs = system.dependent_pairs();
    for (auto [i, j] : out.dependent_pairs) {
        if (system[i].offset() != 0 || system[j].offset() != 0) {
            std::ostringstream msg;
            msg << "renormalized_series: forms " << i << " and " << j
                << " have proportional linear parts and non-zero offsets; the asymptotic form needs "
                   "pairwise independent linear parts when offsets are present";
            throw InvalidArgument(msg.str());
        }
    }
    for (const auto& f : functions) out.functions.push_back(f.name());
    out.t = 0.0;
    out.w = Sequence::zero();
    for (const auto& p : params) {
        out.t += p.t;
        out.w = out.w + p.w;
    }
    out.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    for (std::int64_t N : checkpoints) {
        const Complex raw = multilinear_average(system, functions, N, opts);
        out.raw.push_back(raw);
        out.renormalized.push_back(raw * renormalization_factor(N, out.t, out.w));
    }
    out.stabilization = diagnose_stabilization(out.checkpoints, out.renormalized);
    return out;
}

ConjugatePairResult conjugate_pair_average(std::span<const std::pair<LinearForm, LinearForm>> pairs,
                                           std::span<const ValueView> functions, std::int64_t N,
                                           const AverageOptions& opts) {
    if (pairs.empty()) throw InvalidArgument("conjugate_pair_average: no form pairs");
    if (pairs.size() != functions.size())
        throw InvalidArgument("conjugate_pair_average: one function per form pair required");
    std::vector<LinearForm> forms;
    std::vector<ValueView> fs;
    std::vector<char> conj;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        forms.push_back(pairs[j].first);
        fs.push_back(functions[j]);
        conj.push_back(0);
    }
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        forms.push_back(pairs[j].second);
        fs.push_back(functions[j]);
        conj.push_back(1);
    }
    ConjugatePairResult out;
    out.dependent_pairs = FormSystem(forms).dependent_pairs();
    out.value = average_factors(forms, fs, conj, N, opts);
    return out;
}

QuadratureResult archimedean_limit(const FormSystem& system, std::span<const double> t_list, double abs_tol) {
    if (t_list.size() != system.size()) throw InvalidArgument("archimedean_limit: one exponent per form required");
    if (system.has_offsets()) throw InvalidArgument("archimedean_limit: forms must have zero offsets");
    const std::size_t d = system.dimension();
    if (d > 3) throw CostGuardExceeded("archimedean_limit: dimension must be <= 3");
    if (std::all_of(t_list.begin(), t_list.end(), [](double t) { return t == 0.0; }))
        return {Complex{1.0, 0.0}, 0.0, 0};
    std::vector<std::vector<double>> coeffs;
    for (const auto& f : system.forms()) coeffs.emplace_back(f.coeffs().begin(), f.coeffs().end());
    const std::vector<double> ts(t_list.begin(), t_list.end());
    auto integrand = [&](std::span<const double> x) {
        double phase = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            double l = 0.0;
            for (std::size_t i = 0; i < d; ++i) l += coeffs[j][i] * x[i];
            phase += ts[j] * std::log(l);
        }
        return std::polar(1.0, phase);
    };
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    return integrate_unit_cube(integrand, d, opts);
}

} // namespace multavg
