#include "multavg/arith.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "multavg/errors.hpp"

namespace multavg {

// ---------------------------------------------------------------------------
// Primes
// ---------------------------------------------------------------------------

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
    std::vector<std::int64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        primes.push_back(i);
        if (i <= limit / i)
            for (std::int64_t j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return primes;
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // This witness set is deterministic for all n < 2^64.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < r; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        unsigned k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        out.emplace_back(p, k);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t phi = n;
    for (auto [p, k] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// ---------------------------------------------------------------------------
// Multiplicative functions and the sieve
// ---------------------------------------------------------------------------

MultiplicativeSpec MultiplicativeSpec::multiplicative(std::string name, PrimePowerRule rule,
                                                      bool real_valued) {
    return MultiplicativeSpec(std::move(name), std::move(rule), false, real_valued);
}

MultiplicativeSpec MultiplicativeSpec::completely_multiplicative(std::string name, PrimeRule rule,
                                                                 bool real_valued) {
    PrimePowerRule power_rule = [rule = std::move(rule)](std::uint64_t p, unsigned k) {
        const Complex base = rule(p);
        Complex v = base;
        for (unsigned i = 1; i < k; ++i) v *= base;
        return v;
    };
    return MultiplicativeSpec(std::move(name), std::move(power_rule), true, real_valued);
}

Complex MultiplicativeSpec::prime_power_value(std::uint64_t p, unsigned k) const {
    if (k == 0) return {1.0, 0.0};
    return rule_(p, k);
}

SieveTable::SieveTable(MultiplicativeSpec source, std::vector<Complex> values)
    : source_(std::move(source)), values_(std::move(values)) {
    if (values_.empty()) values_.push_back(Complex{});
}

Complex SieveTable::at(std::int64_t n) const {
    if (n < 1 || n > size()) {
        std::ostringstream msg;
        msg << "sieve table '" << name() << "' covers [1, " << size() << "], requested " << n;
        throw RangeError(msg.str());
    }
    return (*this)[n];
}

namespace {

constexpr double kUnitDiscSlack = 1e-12;

Complex checked_value(const MultiplicativeSpec& spec, std::uint64_t p, unsigned k) {
    const Complex v = spec.prime_power_value(p, k);
    if (!(std::abs(v) <= 1.0 + kUnitDiscSlack)) {
        std::ostringstream msg;
        msg << "multiplicative function '" << spec.name() << "' has |f(" << p << "^" << k
            << ")| = " << std::abs(v) << " > 1";
        throw DomainViolation(msg.str());
    }
    return v;
}

// Linear sieve for the smallest prime factor, then f(n) = f(p^k) f(n / p^k).
std::vector<Complex> sieve_linear(const MultiplicativeSpec& spec, std::int64_t M) {
    const auto size = static_cast<std::size_t>(M) + 1;
    std::vector<std::uint32_t> spf(size, 0);
    std::vector<std::uint32_t> primes;
    for (std::size_t i = 2; i < size; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            const std::size_t ip = i * p;
            if (p > spf[i] || ip >= size) break;
            spf[ip] = p;
        }
    }

    std::vector<Complex> values(size);
    if (M >= 1) values[1] = {1.0, 0.0};
    for (std::size_t n = 2; n < size; ++n) {
        const std::uint32_t p = spf[n];
        std::size_t rest = n / p;
        std::size_t prime_power = p;
        unsigned k = 1;
        while (rest % p == 0) {
            rest /= p;
            prime_power *= p;
            ++k;
        }
        if (rest == 1)
            values[n] = checked_value(spec, p, k);
        else
            values[n] = values[prime_power] * values[rest];
    }
    return values;
}

// Segmented sieve: only primes up to sqrt(M) are held; the cofactor left
// after dividing them out is 1 or a single large prime.
std::vector<Complex> sieve_segmented(const MultiplicativeSpec& spec, std::int64_t M, std::int64_t segment) {
    const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(M))) + 1;
    const std::vector<std::int64_t> small = primes_up_to(root);
    std::vector<std::vector<Complex>> powers(small.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        const std::int64_t p = small[i];
        std::int64_t pk = p;
        powers[i].push_back({1.0, 0.0});
        for (unsigned k = 1; pk <= M; ++k) {
            powers[i].push_back(checked_value(spec, static_cast<std::uint64_t>(p), k));
            if (pk > M / p) break;
            pk *= p;
        }
    }

    std::vector<Complex> values(static_cast<std::size_t>(M) + 1);
    if (M >= 1) values[1] = {1.0, 0.0};
    std::vector<std::int64_t> rem(static_cast<std::size_t>(segment));
    for (std::int64_t lo = 2; lo <= M; lo += segment) {
        const std::int64_t hi = std::min(M + 1, lo + segment);
        const auto len = static_cast<std::size_t>(hi - lo);
        for (std::size_t i = 0; i < len; ++i) {
            rem[i] = lo + static_cast<std::int64_t>(i);
            values[static_cast<std::size_t>(lo) + i] = {1.0, 0.0};
        }
        for (std::size_t pi = 0; pi < small.size(); ++pi) {
            const std::int64_t p = small[pi];
            if (p * p > hi - 1) break;
            for (std::int64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
                const auto i = static_cast<std::size_t>(m - lo);
                unsigned k = 0;
                while (rem[i] % p == 0) {
                    rem[i] /= p;
                    ++k;
                }
                values[static_cast<std::size_t>(m)] *= powers[pi][k];
            }
        }
        for (std::size_t i = 0; i < len; ++i)
            if (rem[i] > 1)
                values[static_cast<std::size_t>(lo) + i] *=
                    checked_value(spec, static_cast<std::uint64_t>(rem[i]), 1);
    }
    return values;
}

} // namespace

SieveTable sieve_values(const MultiplicativeSpec& spec, std::int64_t M, const SieveOptions& opts) {
    if (M < 1) throw InvalidArgument("sieve_values: M must be >= 1");
    if (M > std::int64_t{0xFFFFFFFF}) throw CostGuardExceeded("sieve_values: M exceeds 2^32 - 1");
    bool linear = false;
    switch (opts.method) {
    case SieveMethod::linear: linear = true; break;
    case SieveMethod::segmented: linear = false; break;
    case SieveMethod::automatic: linear = M <= opts.linear_limit; break;
    }
    if (opts.segment_length < 1) throw InvalidArgument("sieve_values: segment length must be positive");
    return SieveTable(spec, linear ? sieve_linear(spec, M) : sieve_segmented(spec, M, opts.segment_length));
}

// ---------------------------------------------------------------------------
// Dirichlet characters
// ---------------------------------------------------------------------------

namespace {

std::uint64_t least_primitive_root(std::uint64_t p, unsigned e, std::uint64_t pe) {
    const std::uint64_t order = pe / p * (p - 1);
    const auto order_factors = factorize(order);
    for (std::uint64_t g = 2; g < pe; ++g) {
        if (g % p == 0) continue;
        bool primitive = true;
        for (auto [r, k] : order_factors) {
            if (pow_mod(g, order / r, pe) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) return g;
    }
    (void)e;
    return 1; // only reached for pe = 2
}

} // namespace

std::vector<CharacterComponent> character_components(std::uint64_t q) {
    if (q == 0) throw InvalidArgument("character modulus must be >= 1");
    std::vector<CharacterComponent> out;
    for (auto [p, e] : factorize(q)) {
        std::uint64_t pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e == 2) out.push_back({4, 3, 2});
            if (e >= 3) {
                out.push_back({pe, pe - 1, 2});
                out.push_back({pe, 5, pe / 4});
            }
        } else {
            out.push_back({pe, least_primitive_root(p, e, pe), pe / p * (p - 1)});
        }
    }
    return out;
}

DirichletCharacter::DirichletCharacter(std::uint64_t modulus, std::uint64_t index, std::vector<Complex> table)
    : modulus_(modulus), index_(index), table_(std::move(table)) {
    real_ = std::all_of(table_.begin(), table_.end(), [](Complex z) { return z.imag() == 0.0; });
}

DirichletCharacter dirichlet_character(std::uint64_t q, std::uint64_t index) {
    if (q == 0) throw InvalidArgument("dirichlet_character: modulus must be >= 1");
    const std::uint64_t phi = euler_phi(q);
    if (index >= phi) {
        std::ostringstream msg;
        msg << "dirichlet_character: index " << index << " out of range [0, " << phi << ") for modulus " << q;
        throw InvalidArgument(msg.str());
    }
    const auto comps = character_components(q);

    // Digits of the index and a common denominator for all phases.
    std::vector<std::uint64_t> digits;
    std::uint64_t rest = index;
    std::uint64_t denom = 1;
    for (const auto& c : comps) {
        digits.push_back(rest % c.order);
        rest /= c.order;
        denom = std::lcm(denom, c.order);
    }

    // Discrete logarithm tables per component. For the pair of components
    // on 2^e (e >= 3), n = (-1)^u 5^v and each component reads its own
    // exponent.
    std::vector<std::vector<std::int64_t>> logs(comps.size());
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        const auto& c = comps[ci];
        logs[ci].assign(c.prime_power, -1);
        const bool two_power_pair = c.prime_power >= 8 && c.prime_power % 2 == 0;
        if (!two_power_pair) {
            std::uint64_t x = 1;
            for (std::uint64_t k = 0; k < c.order; ++k) {
                logs[ci][x] = static_cast<std::int64_t>(k);
                x = mul_mod(x, c.generator, c.prime_power);
            }
        } else {
            const std::uint64_t m = c.prime_power;
            const bool sign_component = c.order == 2 && c.generator == m - 1;
            std::uint64_t five = 1;
            for (std::uint64_t v = 0; v < m / 4; ++v) {
                logs[ci][five] = sign_component ? 0 : static_cast<std::int64_t>(v);
                logs[ci][m - five] = sign_component ? 1 : static_cast<std::int64_t>(v);
                five = mul_mod(five, 5, m);
            }
        }
    }

    std::vector<Complex> table(q, Complex{});
    for (std::uint64_t n = 0; n < q; ++n) {
        if (std::gcd(n, q) != 1) continue;
        std::uint64_t numerator = 0;
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            const auto& c = comps[ci];
            const auto lg = static_cast<std::uint64_t>(logs[ci][n % c.prime_power]);
            numerator = (numerator + (digits[ci] * lg % c.order) * (denom / c.order)) % denom;
        }
        table[n] = e_rational(static_cast<std::int64_t>(numerator), static_cast<std::int64_t>(denom));
    }
    return DirichletCharacter(q, index, std::move(table));
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_name(std::string_view name, std::string_view why) {
    std::ostringstream msg;
    msg << "unknown or malformed builtin '" << name << "': " << why;
    throw InvalidArgument(msg.str());
}

double parse_real(std::string_view text, std::string_view name) {
    text = trim(text);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) bad_name(name, "expected a real argument");
    return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view name) {
    text = trim(text);
    std::uint64_t v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        bad_name(name, "expected a non-negative integer argument");
    return v;
}

std::vector<std::string_view> split_args(std::string_view args) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = args.find(',', start);
        out.push_back(trim(args.substr(start, comma == std::string_view::npos ? args.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace

MultiplicativeSpec archimedean(double t) {
    return MultiplicativeSpec::completely_multiplicative(
        "archimedean(" + format_double(t) + ")",
        [t](std::uint64_t p) { return n_pow_it(static_cast<double>(p), t); }, t == 0.0);
}

MultiplicativeSpec character_function(std::uint64_t q, std::uint64_t index) {
    const auto chi = std::make_shared<DirichletCharacter>(dirichlet_character(q, index));
    return MultiplicativeSpec::completely_multiplicative(
        "character(" + std::to_string(q) + "," + std::to_string(index) + ")",
        [chi](std::uint64_t p) { return (*chi)(static_cast<std::int64_t>(p % chi->modulus())); },
        chi->is_real());
}

MultiplicativeSpec random_pm1(std::uint64_t seed) {
    return MultiplicativeSpec::completely_multiplicative(
        "random_pm1(" + std::to_string(seed) + ")",
        [seed](std::uint64_t p) {
            const std::uint64_t h = splitmix64(seed ^ splitmix64(p));
            return Complex{(h >> 63) ? -1.0 : 1.0, 0.0};
        },
        true);
}

MultiplicativeSpec twisted(std::uint64_t q, std::uint64_t index, double t) {
    const auto chi = std::make_shared<DirichletCharacter>(dirichlet_character(q, index));
    return MultiplicativeSpec::completely_multiplicative(
        "twisted(" + std::to_string(q) + "," + std::to_string(index) + "," + format_double(t) + ")",
        [chi, t](std::uint64_t p) {
            return (*chi)(static_cast<std::int64_t>(p % chi->modulus())) * n_pow_it(static_cast<double>(p), t);
        },
        chi->is_real() && t == 0.0);
}

MultiplicativeSpec conjugate(const MultiplicativeSpec& f) {
    if (f.is_real_valued()) return f;
    const std::string name = "conj(" + f.name() + ")";
    if (f.is_completely_multiplicative())
        return MultiplicativeSpec::completely_multiplicative(
            name, [f](std::uint64_t p) { return std::conj(f.prime_power_value(p, 1)); }, false);
    return MultiplicativeSpec::multiplicative(
        name, [f](std::uint64_t p, unsigned k) { return std::conj(f.prime_power_value(p, k)); }, false);
}

MultiplicativeSpec builtin(std::string_view raw) {
    const std::string_view name = trim(raw);
    const std::size_t open = name.find('(');
    const std::string_view head = trim(name.substr(0, open));
    std::vector<std::string_view> args;
    if (open != std::string_view::npos) {
        if (name.back() != ')') bad_name(name, "missing ')'");
        args = split_args(name.substr(open + 1, name.size() - open - 2));
    }
    auto expect_args = [&](std::size_t n) {
        if (args.size() != n) bad_name(name, "expected " + std::to_string(n) + " argument(s)");
    };

    if (head == "one") {
        expect_args(0);
        return MultiplicativeSpec::completely_multiplicative("one", [](std::uint64_t) { return Complex{1.0, 0.0}; },
                                                             true);
    }
    if (head == "liouville") {
        expect_args(0);
        return MultiplicativeSpec::completely_multiplicative(
            "liouville", [](std::uint64_t) { return Complex{-1.0, 0.0}; }, true);
    }
    if (head == "moebius") {
        expect_args(0);
        return MultiplicativeSpec::multiplicative(
            "moebius", [](std::uint64_t, unsigned k) { return Complex{k == 1 ? -1.0 : 0.0, 0.0}; }, true);
    }
    if (head == "parity") {
        expect_args(0);
        return MultiplicativeSpec::multiplicative(
            "parity", [](std::uint64_t p, unsigned) { return Complex{p == 2 ? -1.0 : 1.0, 0.0}; }, true);
    }
    if (head == "two_adic_sign") {
        expect_args(0);
        return MultiplicativeSpec::completely_multiplicative(
            "two_adic_sign", [](std::uint64_t p) { return Complex{p == 2 ? -1.0 : 1.0, 0.0}; }, true);
    }
    if (head == "archimedean") {
        expect_args(1);
        return archimedean(parse_real(args[0], name));
    }
    if (head == "character") {
        expect_args(2);
        return character_function(parse_unsigned(args[0], name), parse_unsigned(args[1], name));
    }
    if (head == "random_pm1") {
        expect_args(1);
        return random_pm1(parse_unsigned(args[0], name));
    }
    if (head == "twisted") {
        expect_args(3);
        return twisted(parse_unsigned(args[0], name), parse_unsigned(args[1], name), parse_real(args[2], name));
    }
    bad_name(name, "no such builtin");
}

std::vector<std::string> builtin_names() {
    return {"one",          "liouville",         "moebius",          "parity",
            "two_adic_sign", "archimedean(t)",   "character(q,index)", "random_pm1(seed)",
            "twisted(q,index,t)"};
}

} // namespace multavg
