#include "lab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "multavg/arith.hpp"
#include "multavg/errors.hpp"

namespace multavg::lab {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

class FieldError {
public:
    FieldError(std::size_t line, std::string field) : line_(line), field_(std::move(field)) {}

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "config line " << line_ << ", field '" << field_ << "': " << what;
        throw InvalidArgument(msg.str());
    }

private:
    std::size_t line_;
    std::string field_;
};

std::int64_t parse_int(std::string_view s, const FieldError& err) {
    s = trim(s);
    if (const auto caret = s.find('^'); caret != std::string_view::npos) {
        const std::int64_t base = parse_int(s.substr(0, caret), err);
        const std::int64_t exp = parse_int(s.substr(caret + 1), err);
        if (exp < 0) err.fail("negative exponent");
        std::int64_t v = 1;
        for (std::int64_t i = 0; i < exp; ++i) {
            if (base != 0 && std::abs(v) > INT64_MAX / std::abs(base)) err.fail("integer overflow");
            v *= base;
        }
        return v;
    }
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        err.fail("expected an integer, got '" + std::string(s) + "'");
    return v;
}

std::int64_t parse_nonneg(std::string_view s, const FieldError& err) {
    const std::int64_t v = parse_int(s, err);
    if (v < 0) err.fail("must be non-negative");
    return v;
}

double parse_real(std::string_view s, const FieldError& err) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        err.fail("expected a number, got '" + std::string(s) + "'");
    return v;
}

Complex parse_complex(std::string_view s, const FieldError& err) {
    const auto parts = split(s, ',');
    if (parts.size() == 1) return {parse_real(parts[0], err), 0.0};
    if (parts.size() == 2) return {parse_real(parts[0], err), parse_real(parts[1], err)};
    err.fail("expected 're' or 're, im'");
}

std::pair<std::int64_t, Complex> parse_term(std::string_view s, const FieldError& err) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) err.fail("expected 'k : re, im'");
    return {parse_int(s.substr(0, colon), err), parse_complex(s.substr(colon + 1), err)};
}

template <class Enum, std::size_t K>
Enum parse_enum(std::string_view s, const std::pair<std::string_view, Enum> (&table)[K], const FieldError& err) {
    for (const auto& [name, value] : table)
        if (name == s) return value;
    std::string options;
    for (const auto& entry : table) options += (options.empty() ? "" : ", ") + std::string(entry.first);
    err.fail("unknown value '" + std::string(s) + "' (expected one of " + options + ")");
}

constexpr std::pair<std::string_view, ParamsMode> kParamsModes[] = {
    {"trivial", ParamsMode::trivial}, {"fit", ParamsMode::fit}, {"manual", ParamsMode::manual}};
constexpr std::pair<std::string_view, GowersMethod> kGowersMethods[] = {
    {"fast", GowersMethod::fast}, {"recursive", GowersMethod::recursive}, {"compare", GowersMethod::compare}};
constexpr std::pair<std::string_view, Lemma> kLemmas[] = {
    {"partial", Lemma::partial}, {"major-arc", Lemma::major_arc}, {"structured", Lemma::structured}};

template <class Enum, std::size_t K>
std::string_view enum_name(Enum v, const std::pair<std::string_view, Enum> (&table)[K]) {
    for (const auto& [name, value] : table)
        if (value == v) return name;
    return "?";
}

std::string complex_text(Complex z) { return format_double(z.real()) + ", " + format_double(z.imag()); }

} // namespace

std::string_view to_string(ParamsMode mode) { return enum_name(mode, kParamsModes); }
std::string_view to_string(GowersMethod method) { return enum_name(method, kGowersMethods); }
std::string_view to_string(Lemma lemma) { return enum_name(lemma, kLemmas); }

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig c;
    // Repeatable keys start from empty lists; single keys may appear once.
    c.lemma_alpha.clear();
    bool alpha_seen = false;
    std::set<std::string> seen;
    std::string section = "experiment";
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') FieldError(line_no, std::string(line)).fail("unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static const std::set<std::string> known = {"experiment", "functions", "forms",  "conj_forms",
                                                        "checkpoints", "mean",     "params", "fit",
                                                        "gowers",      "kernel",   "lemma",  "ergodic"};
            if (!known.count(section)) FieldError(line_no, section).fail("unknown section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) FieldError(line_no, std::string(line)).fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const std::string field = section + "." + key;
        const FieldError err(line_no, field);

        static const std::set<std::string> repeatable = {"functions.f", "forms.L", "conj_forms.L", "ergodic.F",
                                                         "ergodic.G"};
        if (!repeatable.count(field)) {
            if (seen.count(field)) err.fail("given more than once");
            seen.insert(field);
        }

        if (field == "experiment.kind") {
            if (std::find(std::begin(kKinds), std::end(kKinds), value) == std::end(kKinds))
                err.fail("unknown experiment kind '" + std::string(value) + "'");
            c.kind = std::string(value);
        } else if (field == "experiment.output") {
            c.output = std::string(value);
        } else if (field == "experiment.seed") {
            c.seed = static_cast<std::uint64_t>(parse_nonneg(value, err));
        } else if (field == "experiment.threads") {
            c.threads = static_cast<unsigned>(parse_nonneg(value, err));
        } else if (field == "experiment.block_rows") {
            c.block_rows = parse_int(value, err);
            if (c.block_rows < 1) err.fail("must be >= 1");
        } else if (field == "functions.f") {
            if (value.empty()) err.fail("empty function spec");
            c.functions.emplace_back(value);
        } else if (field == "forms.L" || field == "conj_forms.L") {
            try {
                (section == "forms" ? c.forms : c.conj_forms).push_back(parse_form(value));
            } catch (const Error& e) {
                err.fail(e.what());
            }
        } else if (field == "checkpoints.values") {
            for (auto item : split(value, ',')) {
                const std::int64_t N = parse_int(item, err);
                if (N < 1) err.fail("checkpoints must be >= 1");
                c.checkpoints.push_back(N);
            }
        } else if (field == "mean.a") {
            c.mean_a = parse_int(value, err);
        } else if (field == "mean.b") {
            c.mean_b = parse_int(value, err);
        } else if (field == "params.mode") {
            c.params = parse_enum(value, kParamsModes, err);
        } else if (field == "params.t") {
            c.manual_t = parse_real(value, err);
        } else if (field == "fit.t_min") {
            c.fit_t_min = parse_real(value, err);
        } else if (field == "fit.t_max") {
            c.fit_t_max = parse_real(value, err);
        } else if (field == "fit.t_step") {
            c.fit_t_step = parse_real(value, err);
            if (!(c.fit_t_step > 0.0)) err.fail("must be positive");
        } else if (field == "fit.q_max") {
            c.fit_q_max = static_cast<std::uint64_t>(parse_nonneg(value, err));
            if (c.fit_q_max < 1) err.fail("must be >= 1");
        } else if (field == "fit.prime_cutoff") {
            c.fit_prime_cutoff = parse_nonneg(value, err);
        } else if (field == "gowers.s") {
            c.gowers_s = static_cast<unsigned>(parse_nonneg(value, err));
            if (c.gowers_s < 1) err.fail("must be >= 1");
        } else if (field == "gowers.method") {
            c.gowers_method = parse_enum(value, kGowersMethods, err);
        } else if (field == "gowers.cost_limit") {
            c.gowers_cost_limit = parse_real(value, err);
        } else if (field == "kernel.Q") {
            c.kernel_Q = parse_int(value, err);
            if (c.kernel_Q < 1) err.fail("must be >= 1");
        } else if (field == "kernel.V") {
            c.kernel_V = parse_int(value, err);
            if (c.kernel_V < 1) err.fail("must be >= 1");
        } else if (field == "lemma.name") {
            c.lemma = parse_enum(value, kLemmas, err);
        } else if (field == "lemma.alpha") {
            alpha_seen = true;
            for (auto item : split(value, ',')) c.lemma_alpha.push_back(parse_real(item, err));
        } else if (field == "lemma.c") {
            c.lemma_c = parse_complex(value, err);
        } else if (field == "lemma.t") {
            c.lemma_t = parse_real(value, err);
        } else if (field == "lemma.p") {
            c.lemma_p = parse_int(value, err);
        } else if (field == "lemma.xi") {
            c.lemma_xi = parse_int(value, err);
        } else if (field == "ergodic.c") {
            c.ergodic_c = parse_real(value, err);
        } else if (field == "ergodic.F") {
            c.ergodic_F.push_back(parse_term(value, err));
        } else if (field == "ergodic.G") {
            c.ergodic_G.push_back(parse_term(value, err));
        } else {
            err.fail("unknown field");
        }
    }
    if (!alpha_seen) c.lemma_alpha = {0.0};
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[experiment]\n"
        << "kind = " << c.kind << "\n";
    if (!c.output.empty()) out << "output = " << c.output << "\n";
    out << "seed = " << c.seed << "\n"
        << "threads = " << c.threads << "\n"
        << "block_rows = " << c.block_rows << "\n";

    out << "\n[functions]\n";
    for (const auto& f : c.functions) out << "f = " << f << "\n";
    out << "\n[forms]\n";
    for (const auto& L : c.forms) out << "L = " << format_form(L) << "\n";
    out << "\n[conj_forms]\n";
    for (const auto& L : c.conj_forms) out << "L = " << format_form(L) << "\n";
    out << "\n[checkpoints]\n";
    if (!c.checkpoints.empty()) {
        out << "values = ";
        for (std::size_t i = 0; i < c.checkpoints.size(); ++i) out << (i ? ", " : "") << c.checkpoints[i];
        out << "\n";
    }

    out << "\n[mean]\n"
        << "a = " << c.mean_a << "\n"
        << "b = " << c.mean_b << "\n";
    out << "\n[params]\n"
        << "mode = " << to_string(c.params) << "\n"
        << "t = " << format_double(c.manual_t) << "\n";
    out << "\n[fit]\n"
        << "t_min = " << format_double(c.fit_t_min) << "\n"
        << "t_max = " << format_double(c.fit_t_max) << "\n"
        << "t_step = " << format_double(c.fit_t_step) << "\n"
        << "q_max = " << c.fit_q_max << "\n"
        << "prime_cutoff = " << c.fit_prime_cutoff << "\n";
    out << "\n[gowers]\n"
        << "s = " << c.gowers_s << "\n"
        << "method = " << to_string(c.gowers_method) << "\n"
        << "cost_limit = " << format_double(c.gowers_cost_limit) << "\n";
    out << "\n[kernel]\n"
        << "Q = " << c.kernel_Q << "\n"
        << "V = " << c.kernel_V << "\n";
    out << "\n[lemma]\n"
        << "name = " << to_string(c.lemma) << "\n";
    if (!c.lemma_alpha.empty()) {
        out << "alpha = ";
        for (std::size_t i = 0; i < c.lemma_alpha.size(); ++i) out << (i ? ", " : "") << format_double(c.lemma_alpha[i]);
        out << "\n";
    }
    out << "c = " << complex_text(c.lemma_c) << "\n"
        << "t = " << format_double(c.lemma_t) << "\n"
        << "p = " << c.lemma_p << "\n"
        << "xi = " << c.lemma_xi << "\n";
    out << "\n[ergodic]\n"
        << "c = " << format_double(c.ergodic_c) << "\n";
    for (const auto& [k, ck] : c.ergodic_F) out << "F = " << k << " : " << complex_text(ck) << "\n";
    for (const auto& [k, ck] : c.ergodic_G) out << "G = " << k << " : " << complex_text(ck) << "\n";
    return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace multavg::lab
