#include "lab/run.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "multavg/arith.hpp"
#include "multavg/averages.hpp"
#include "multavg/ergodic.hpp"
#include "multavg/errors.hpp"
#include "multavg/gowers.hpp"
#include "multavg/halasz.hpp"
#include "multavg/oracles.hpp"
#include "multavg/parallel.hpp"
#include "multavg/structure.hpp"
#include "multavg/version.hpp"

namespace multavg::lab {
namespace {

std::string num(double x) { return format_double(x); }
std::string num(std::int64_t x) { return std::to_string(x); }

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw InvalidArgument("config field '" + field + "': " + what);
}

unsigned thread_count(const ExperimentConfig& c) { return c.threads == 0 ? default_thread_count() : c.threads; }

AverageOptions average_options(const ExperimentConfig& c) {
    AverageOptions o;
    o.threads = thread_count(c);
    o.block_rows = c.block_rows;
    return o;
}

GowersOptions gowers_options(const ExperimentConfig& c) {
    GowersOptions o;
    o.threads = thread_count(c);
    o.cost_limit = c.gowers_cost_limit;
    return o;
}

// "p re [im]" per line; the function is completely multiplicative and every
// prime it is evaluated at must be listed.
MultiplicativeSpec prime_table_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open prime-value table '" + path + "'");
    auto values = std::make_shared<std::map<std::uint64_t, Complex>>();
    bool real = true;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::uint64_t p = 0;
        double re = 0.0, im = 0.0;
        if (!(fields >> p)) continue;
        if (!(fields >> re)) throw InvalidArgument(path + ":" + std::to_string(line_no) + ": missing value");
        fields >> im;
        if (!is_prime(p)) throw InvalidArgument(path + ":" + std::to_string(line_no) + ": " + std::to_string(p) + " is not prime");
        if (im != 0.0) real = false;
        (*values)[p] = {re, im};
    }
    return MultiplicativeSpec::completely_multiplicative(
        "table:" + path,
        [values, path](std::uint64_t p) {
            const auto it = values->find(p);
            if (it == values->end())
                throw InvalidArgument("prime-value table '" + path + "' has no entry for p = " + std::to_string(p));
            return it->second;
        },
        real);
}

MultiplicativeSpec resolve_function(const std::string& spec, std::uint64_t seed) {
    if (spec.rfind("table:", 0) == 0) return prime_table_function(spec.substr(6));
    if (spec == "random_pm1") return random_pm1(seed);
    return builtin(spec);
}

std::vector<SieveTable> sieve_functions(const ExperimentConfig& c, std::int64_t M) {
    require(!c.functions.empty(), "functions.f", "at least one function is required");
    std::vector<SieveTable> out;
    for (const auto& spec : c.functions) out.push_back(sieve_values(resolve_function(spec, c.seed), M));
    return out;
}

std::vector<ValueView> views(const std::vector<SieveTable>& tables) {
    return std::vector<ValueView>(tables.begin(), tables.end());
}

HalaszParams params_for(const ExperimentConfig& c, const SieveTable& f) {
    switch (c.params) {
    case ParamsMode::trivial:
        return HalaszParams::trivial();
    case ParamsMode::manual:
        return HalaszParams::manual(c.manual_t, Sequence::zero());
    case ParamsMode::fit: {
        FitGrid grid;
        grid.t_min = c.fit_t_min;
        grid.t_max = c.fit_t_max;
        grid.t_step = c.fit_t_step;
        grid.q_max = c.fit_q_max;
        grid.prime_cutoff = c.fit_prime_cutoff;
        grid.threads = thread_count(c);
        return fit_halasz_params(f, grid);
    }
    }
    return HalaszParams::trivial();
}

std::string param_note(const std::string& name, const HalaszParams& p) {
    return "params " + name + ": t=" + num(p.t) + " chi=(" + std::to_string(p.chi.modulus()) + "," +
           std::to_string(p.chi.index()) + ") distance_sq=" + num(p.distance_sq_at_fit);
}

void stabilization_note(Table& t, const Stabilization& s) {
    t.notes.push_back("stabilization last_three_width=" + num(s.last_three_width) +
                      " last_decade_width=" + num(s.last_decade_width) + " stabilized=" + (s.stabilized ? "yes" : "no"));
}

void dependency_notes(Table& t, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    for (const auto& [i, j] : pairs)
        t.notes.push_back("warning: forms " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " are dependent");
}

std::int64_t max_checkpoint(const ExperimentConfig& c) {
    require(!c.checkpoints.empty(), "checkpoints.values", "at least one checkpoint is required");
    return *std::max_element(c.checkpoints.begin(), c.checkpoints.end());
}

Table run_mean(const ExperimentConfig& c) {
    require(c.mean_a >= 1, "mean.a", "must be >= 1");
    require(c.mean_b >= 0, "mean.b", "must be >= 0");
    const auto tables = sieve_functions(c, c.mean_a * max_checkpoint(c) + c.mean_b);
    Table t;
    t.columns = {"function", "N", "raw_re", "raw_im", "renorm_re", "renorm_im", "t"};
    for (const auto& f : tables) {
        const HalaszParams p = params_for(c, f);
        t.notes.push_back(param_note(f.name(), p));
        const MeanSeries series = mean_series(f, c.mean_a, c.mean_b, p, c.checkpoints);
        for (const auto& e : series.entries)
            t.rows.push_back({f.name(), num(e.N), num(e.raw.real()), num(e.raw.imag()), num(e.renormalized.real()),
                              num(e.renormalized.imag()), num(p.t)});
        stabilization_note(t, series.stabilization);
    }
    return t;
}

Table run_halasz_fit(const ExperimentConfig& c) {
    const std::int64_t N = max_checkpoint(c);
    const auto tables = sieve_functions(c, N);
    ExperimentConfig fit = c;
    fit.params = ParamsMode::fit;
    Table t;
    t.columns = {"function", "t", "modulus", "index", "distance_sq", "prime_cutoff", "w_at_N", "N"};
    for (const auto& f : tables) {
        const HalaszParams p = params_for(fit, f);
        const std::int64_t cutoff = p.fitted_over.prime_cutoff > 0 ? p.fitted_over.prime_cutoff : f.size();
        t.rows.push_back({f.name(), num(p.t), std::to_string(p.chi.modulus()), std::to_string(p.chi.index()),
                          num(p.distance_sq_at_fit), num(cutoff), num(p.w(N)), num(N)});
    }
    return t;
}

Table run_multiavg(const ExperimentConfig& c) {
    require(!c.forms.empty(), "forms.L", "at least one form is required");
    require(c.forms.size() == c.functions.size(), "functions.f", "one function per form is required");
    const FormSystem system(c.forms);
    const auto tables = sieve_functions(c, system.max_value(max_checkpoint(c)));
    std::vector<HalaszParams> params;
    for (const auto& f : tables) params.push_back(params_for(c, f));
    const auto fs = views(tables);
    const AverageSeries series = renormalized_series(system, fs, params, c.checkpoints, average_options(c));
    Table t;
    dependency_notes(t, series.dependent_pairs);
    t.notes.push_back("t=" + num(series.t));
    t.columns = {"N", "raw_re", "raw_im", "renorm_re", "renorm_im", "abs"};
    for (std::size_t i = 0; i < series.checkpoints.size(); ++i)
        t.rows.push_back({num(series.checkpoints[i]), num(series.raw[i].real()), num(series.raw[i].imag()),
                          num(series.renormalized[i].real()), num(series.renormalized[i].imag()),
                          num(std::abs(series.raw[i]))});
    stabilization_note(t, series.stabilization);
    return t;
}

Table run_gowers(const ExperimentConfig& c) {
    const auto tables = sieve_functions(c, max_checkpoint(c));
    const auto opts = gowers_options(c);
    Table t;
    if (c.gowers_method == GowersMethod::compare)
        t.columns = {"function", "N", "s", "recursive", "fast", "difference"};
    else
        t.columns = {"function", "N", "s", "norm", "method"};
    for (const auto& f : tables) {
        for (std::int64_t N : c.checkpoints) {
            const CyclicSignal a = CyclicSignal::embed(f, N);
            std::vector<std::string> row = {f.name(), num(N), std::to_string(c.gowers_s)};
            if (c.gowers_method == GowersMethod::compare) {
                const double r = gowers_norm(a, c.gowers_s, opts);
                const double fast = gowers_norm_fast(a, c.gowers_s, opts);
                row.insert(row.end(), {num(r), num(fast), num(std::abs(r - fast))});
            } else if (c.gowers_method == GowersMethod::recursive) {
                row.insert(row.end(), {num(gowers_norm(a, c.gowers_s, opts)), "recursive"});
            } else {
                row.insert(row.end(), {num(gowers_norm_fast(a, c.gowers_s, opts)), "fast"});
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table run_decompose(const ExperimentConfig& c) {
    const auto tables = sieve_functions(c, max_checkpoint(c));
    Table t;
    t.columns = {"function",  "N",       "Q",       "V",        "spectrum_size", "kernel_min",
                 "kernel_mean", "sup_st", "sup_un", "max_reconstruction_error", "u2_un"};
    for (std::int64_t N : c.checkpoints) {
        const KernelSpec spec{c.kernel_Q, c.kernel_V, N};
        const Kernel kernel = build_kernel(spec);
        double kmin = kernel.values()[0].real();
        CompensatedSum kmean;
        for (const auto& v : kernel.values()) {
            kmin = std::min(kmin, v.real());
            kmean.add(v.real());
        }
        for (const auto& f : tables) {
            const Decomposition d = decompose(ValueView(f), kernel);
            double sup_st = 0.0, sup_un = 0.0, recon = 0.0;
            for (std::int64_t n = 1; n <= N; ++n) {
                const auto k = static_cast<std::size_t>(n);
                sup_st = std::max(sup_st, std::abs(d.f_st[k]));
                sup_un = std::max(sup_un, std::abs(d.f_un[k]));
                recon = std::max(recon, std::abs(d.f[k] - d.f_st[k] - d.f_un[k]));
            }
            const double u2 = gowers_u2_spectral(CyclicSignal::embed(d.uniform(), N));
            t.rows.push_back({f.name(), num(N), num(c.kernel_Q), num(c.kernel_V),
                              std::to_string(spectrum(spec).size()), num(kmin),
                              num(kmean.value() / static_cast<double>(N)), num(sup_st), num(sup_un), num(recon),
                              num(u2)});
        }
    }
    return t;
}

Table run_probe(const ExperimentConfig& c) {
    require(c.forms.size() == c.functions.size(), "functions.f", "one function per form is required");
    require(c.forms.size() >= 3, "forms.L", "the probe needs at least three forms");
    const FormSystem system(c.forms);
    const std::int64_t Nmax = max_checkpoint(c);
    const auto tables = sieve_functions(c, std::max(system.max_value(Nmax), Nmax));
    const auto fs = views(tables);
    Table t;
    t.columns = {"N", "N_tilde", "s", "avg_re", "avg_im", "abs"};
    for (std::size_t j = 0; j < fs.size(); ++j) t.columns.push_back("gowers_" + std::to_string(j + 1));
    for (std::int64_t N : c.checkpoints) {
        const ProbeResult r = uniformity_probe(system, fs, N, c.gowers_s, average_options(c), gowers_options(c));
        std::vector<std::string> row = {num(r.N), num(r.N_tilde), std::to_string(r.s), num(r.average.real()),
                                        num(r.average.imag()), num(std::abs(r.average))};
        for (double g : r.gowers) row.push_back(num(g));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_lemma(const ExperimentConfig& c) {
    Table t;
    switch (c.lemma) {
    case Lemma::partial: {
        require(c.functions.size() == 1, "functions.f", "the partial-sum lemma takes exactly one function");
        const auto tables = sieve_functions(c, max_checkpoint(c));
        const SieveTable& f = tables.front();
        AsymptoticHypothesis h;
        h.a = [&f](std::int64_t n) { return f[n]; };
        h.n_max = f.size();
        h.c = c.lemma_c;
        h.t = c.lemma_t;
        t.columns = {"N", "alpha", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "difference"};
        for (double alpha : c.lemma_alpha) {
            const PartialCheck r = partial_prime_check(h, alpha, c.checkpoints);
            t.notes.push_back("alpha=" + num(alpha) + " c_prime=" + num(r.c_prime.real()) + "," +
                              num(r.c_prime.imag()) + " quadrature_error=" + num(r.quadrature_error));
            for (const auto& row : r.rows)
                t.rows.push_back({num(row.N), num(alpha), num(row.lhs.real()), num(row.lhs.imag()),
                                  num(row.rhs.real()), num(row.rhs.imag()), num(row.difference)});
        }
        return t;
    }
    case Lemma::major_arc: {
        require(c.functions.size() == 1, "functions.f", "the major-arc check takes exactly one function");
        const auto tables = sieve_functions(c, max_checkpoint(c));
        const HalaszParams p = params_for(c, tables.front());
        t.notes.push_back(param_note(tables.front().name(), p));
        const MajorArcCheck r = major_arc_fourier(tables.front(), c.lemma_p, c.kernel_Q, c.lemma_xi, p, c.checkpoints);
        t.columns = {"N", "xi", "coef_re", "coef_im", "renorm_re", "renorm_im"};
        for (const auto& row : r.rows)
            t.rows.push_back({num(row.N), num(row.xi), num(row.coefficient.real()), num(row.coefficient.imag()),
                              num(row.renormalized.real()), num(row.renormalized.imag())});
        stabilization_note(t, r.stabilization);
        return t;
    }
    case Lemma::structured: {
        require(!c.forms.empty(), "forms.L", "at least one form is required");
        require(c.forms.size() == c.functions.size(), "functions.f", "one function per form is required");
        const FormSystem system(c.forms);
        const std::int64_t M = companion_prime(system, max_checkpoint(c), c.kernel_Q);
        const auto tables = sieve_functions(c, M);
        std::vector<HalaszParams> params;
        for (const auto& f : tables) params.push_back(params_for(c, f));
        const auto fs = views(tables);
        const StructuredCheck r =
            structured_average_check(system, fs, c.kernel_Q, c.kernel_V, params, c.checkpoints, average_options(c));
        t.columns = {"N", "N_tilde", "structured_re", "structured_im", "renorm_re", "renorm_im", "full_re", "full_im",
                     "gap"};
        for (const auto& row : r.rows)
            t.rows.push_back({num(row.N), num(row.N_tilde), num(row.structured.real()), num(row.structured.imag()),
                              num(row.renormalized.real()), num(row.renormalized.imag()), num(row.full.real()),
                              num(row.full.imag()), num(row.gap)});
        stabilization_note(t, r.stabilization);
        return t;
    }
    }
    return t;
}

Table run_ergodic(const ExperimentConfig& c) {
    require(c.forms.size() == c.conj_forms.size(), "conj_forms.L", "one conjugate form per form is required");
    std::vector<std::pair<LinearForm, LinearForm>> pairs;
    for (std::size_t j = 0; j < c.forms.size(); ++j) pairs.emplace_back(c.forms[j], c.conj_forms[j]);
    const LogRotationAction action{c.ergodic_c};
    const TrigObservable F{c.ergodic_F};
    const TrigObservable G{c.ergodic_G};
    ErgodicOptions opts;
    opts.threads = thread_count(c);
    opts.block_rows = c.block_rows;
    Table t;
    t.columns = {"N", "re", "im", "modulus"};
    require(!c.checkpoints.empty(), "checkpoints.values", "at least one checkpoint is required");
    for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
        const ErgodicResult r = ergodic_average(action, F, G, pairs, c.checkpoints[i], opts);
        if (i == 0) dependency_notes(t, r.dependent_pairs);
        t.rows.push_back({num(c.checkpoints[i]), num(r.value.real()), num(r.value.imag()), num(std::abs(r.value))});
    }
    return t;
}

Table run_counterexample(const ExperimentConfig& c) {
    Table t;
    t.columns = {"N", "re", "im", "modulus", "argument", "asymptotic_re", "asymptotic_im"};
    for (const auto& row : counterexample_trace(c.checkpoints, c.ergodic_c))
        t.rows.push_back({num(row.N), num(row.value.real()), num(row.value.imag()), num(row.modulus),
                          num(row.argument), num(row.asymptotic.real()), num(row.asymptotic.imag())});
    return t;
}

} // namespace

Table run_experiment(const ExperimentConfig& c) {
    if (c.kind == "mean") return run_mean(c);
    if (c.kind == "halasz-fit") return run_halasz_fit(c);
    if (c.kind == "multiavg") return run_multiavg(c);
    if (c.kind == "gowers") return run_gowers(c);
    if (c.kind == "decompose") return run_decompose(c);
    if (c.kind == "probe") return run_probe(c);
    if (c.kind == "verify-lemma") return run_lemma(c);
    if (c.kind == "ergodic") return run_ergodic(c);
    if (c.kind == "counterexample") return run_counterexample(c);
    throw InvalidArgument("config field 'experiment.kind': unknown experiment kind '" + c.kind + "'");
}

void write_table(std::ostream& out, const ExperimentConfig& c, const Table& t, double wall_seconds) {
    out << "# multavg-lab " << c.kind << "\n"
        << "# schema " << c.kind << "/" << kSchemaVersion << "\n"
        << "# version " << kVersion << "\n"
        << "# config_hash fnv1a64:" << config_hash(c) << "\n";
    for (const auto& note : t.notes) out << "# " << note << "\n";
    out << "# wall_time_s " << format_double(wall_seconds) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const CostGuardExceeded& e) {
        err << "cost guard: " << e.what() << "\n";
        return kExitCostGuard;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const auto start = std::chrono::steady_clock::now();
        const Table table = run_experiment(c);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.output.empty()) {
            write_table(out, c, table, wall);
        } else {
            std::ofstream file(c.output);
            if (!file) throw InvalidArgument("config field 'experiment.output': cannot write '" + c.output + "'");
            write_table(file, c, table, wall);
        }
        return kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

} // namespace multavg::lab
