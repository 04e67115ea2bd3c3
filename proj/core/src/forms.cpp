#include "multavg/forms.hpp"

#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "multavg/arith.hpp"
#include "multavg/errors.hpp"

namespace multavg {

LinearForm::LinearForm(std::vector<std::int64_t> coeffs, std::int64_t offset)
    : coeffs_(std::move(coeffs)), offset_(offset) {
    if (coeffs_.empty()) throw InvalidArgument("linear form needs dimension >= 1");
    bool positive = false;
    for (auto k : coeffs_) {
        if (k < 0) throw InvalidArgument("linear form coefficients must be non-negative");
        positive = positive || k > 0;
    }
    if (!positive) throw InvalidArgument("linear form needs a strictly positive coefficient");
}

std::int64_t LinearForm::coefficient_sum() const noexcept {
    return std::accumulate(coeffs_.begin(), coeffs_.end(), std::int64_t{0});
}

std::int64_t LinearForm::evaluate(std::span<const std::int64_t> m) const {
    if (m.size() != coeffs_.size()) {
        std::ostringstream msg;
        msg << "form of dimension " << coeffs_.size() << " evaluated at a point of dimension " << m.size();
        throw InvalidArgument(msg.str());
    }
    std::int64_t v = offset_;
    for (std::size_t i = 0; i < m.size(); ++i) v += coeffs_[i] * m[i];
    return v;
}

bool pairwise_independent(const LinearForm& f, const LinearForm& g) {
    if (f.dimension() != g.dimension()) throw InvalidArgument("pairwise_independent: dimension mismatch");
    const auto& a = f.coeffs();
    const auto& b = g.coeffs();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (static_cast<int128>(a[i]) * b[j] != static_cast<int128>(a[j]) * b[i]) return true;
    // All 2x2 minors vanish: both vectors are non-zero, so they are proportional.
    return false;
}

namespace {

[[noreturn]] void parse_error(std::string_view text, std::string_view why) {
    std::ostringstream msg;
    msg << "cannot parse linear form '" << text << "': " << why;
    throw InvalidArgument(msg.str());
}

void skip_space(std::string_view& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
}

std::int64_t read_int(std::string_view& s, std::string_view whole) {
    skip_space(s);
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) parse_error(whole, "expected an integer");
    s.remove_prefix(static_cast<std::size_t>(res.ptr - s.data()));
    return v;
}

} // namespace

LinearForm parse_form(std::string_view text) {
    std::string_view s = text;
    skip_space(s);
    if (const auto eq = s.find('='); eq != std::string_view::npos) {
        s.remove_prefix(eq + 1);
        skip_space(s);
    }
    if (s.empty() || s.front() != '[') parse_error(text, "expected '['");
    s.remove_prefix(1);
    std::vector<std::int64_t> coeffs;
    for (;;) {
        coeffs.push_back(read_int(s, text));
        skip_space(s);
        if (s.empty()) parse_error(text, "unterminated coefficient list");
        if (s.front() == ',') {
            s.remove_prefix(1);
            continue;
        }
        if (s.front() == ']') {
            s.remove_prefix(1);
            break;
        }
        parse_error(text, "expected ',' or ']'");
    }
    skip_space(s);
    std::int64_t offset = 0;
    if (!s.empty()) {
        const char sign = s.front();
        if (sign != '+' && sign != '-') parse_error(text, "expected '+ a' or '- a' after ']'");
        s.remove_prefix(1);
        skip_space(s);
        if (!s.empty() && (s.front() == '+' || s.front() == '-')) parse_error(text, "double sign");
        offset = read_int(s, text);
        if (sign == '-') offset = -offset;
        skip_space(s);
        if (!s.empty()) parse_error(text, "trailing characters");
    }
    return LinearForm(std::move(coeffs), offset);
}

std::string format_form(const LinearForm& form) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < form.coeffs().size(); ++i) out << (i ? "," : "") << form.coeffs()[i];
    out << ']';
    if (form.offset() > 0) out << " + " << form.offset();
    if (form.offset() < 0) out << " - " << -form.offset();
    return out.str();
}

FormSystem::FormSystem(std::vector<LinearForm> forms) : forms_(std::move(forms)) {
    if (forms_.empty()) throw InvalidArgument("form system needs at least one form");
    dimension_ = forms_.front().dimension();
    kappa_ = 0;
    for (const auto& f : forms_) {
        if (f.dimension() != dimension_) throw InvalidArgument("form system mixes dimensions");
        kappa_ += 2 * f.coefficient_sum();
    }
}

bool FormSystem::has_offsets() const noexcept {
    for (const auto& f : forms_)
        if (f.offset() != 0) return true;
    return false;
}

std::vector<std::pair<std::size_t, std::size_t>> FormSystem::dependent_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < forms_.size(); ++i)
        for (std::size_t j = i + 1; j < forms_.size(); ++j)
            if (!pairwise_independent(forms_[i], forms_[j])) out.emplace_back(i, j);
    return out;
}

std::int64_t FormSystem::max_value(std::int64_t N) const noexcept {
    std::int64_t best = 0;
    for (const auto& f : forms_) best = std::max(best, f.max_on_box(N));
    return best;
}

std::int64_t companion_prime(std::int64_t kappa, std::int64_t N, std::int64_t Q) {
    if (kappa < 1 || N < 1 || Q < 1) throw InvalidArgument("companion_prime: kappa, N, Q must be >= 1");
    const std::int64_t floor_value = kappa * N;
    const std::int64_t bound = 10 * kappa * N * Q;
    // First candidate > kappa N congruent to 1 mod Q.
    std::int64_t candidate = floor_value + 1;
    const std::int64_t r = ((candidate - 1) % Q + Q) % Q;
    if (r != 0) candidate += Q - r;
    for (; candidate <= bound + 1; candidate += Q)
        if (is_prime(static_cast<std::uint64_t>(candidate))) return candidate;
    std::ostringstream msg;
    msg << "companion_prime: no prime = 1 mod " << Q << " in (" << floor_value << ", " << bound << "]";
    throw RangeError(msg.str());
}

std::int64_t companion_prime(const FormSystem& system, std::int64_t N, std::int64_t Q) {
    return companion_prime(system.kappa(), N, Q);
}

} // namespace multavg
