#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "multavg/numeric.hpp"

namespace multavg {

// ---------------------------------------------------------------------------
// Primes and factorization
// ---------------------------------------------------------------------------

/// All primes in [2, limit], ascending. Empty when limit < 2.
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t n);

/// Prime factorization by trial division, primes ascending.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t n);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

// ---------------------------------------------------------------------------
// Multiplicative functions
// ---------------------------------------------------------------------------

/// Value rule at prime powers: (p, k) -> f(p^k), k >= 1.
using PrimePowerRule = std::function<Complex(std::uint64_t p, unsigned k)>;
/// Value rule at primes, for completely multiplicative functions.
using PrimeRule = std::function<Complex(std::uint64_t p)>;

/// A multiplicative function with values in the closed unit disc, given by
/// its values at prime powers.
class MultiplicativeSpec {
public:
    /// f(p^k) = rule(p, k).
    static MultiplicativeSpec multiplicative(std::string name, PrimePowerRule rule, bool real_valued);
    /// f(p^k) = rule(p)^k.
    static MultiplicativeSpec completely_multiplicative(std::string name, PrimeRule rule,
                                                        bool real_valued);

    const std::string& name() const noexcept { return name_; }
    bool is_completely_multiplicative() const noexcept { return completely_; }
    bool is_real_valued() const noexcept { return real_; }

    Complex prime_power_value(std::uint64_t p, unsigned k) const;

private:
    MultiplicativeSpec(std::string name, PrimePowerRule rule, bool completely, bool real)
        : name_(std::move(name)), rule_(std::move(rule)), completely_(completely), real_(real) {}

    std::string name_;
    PrimePowerRule rule_;
    bool completely_;
    bool real_;
};

/// Values f(1..M) of a multiplicative function. Immutable after construction.
class SieveTable {
public:
    SieveTable(MultiplicativeSpec source, std::vector<Complex> values);

    const MultiplicativeSpec& source() const noexcept { return source_; }
    const std::string& name() const noexcept { return source_.name(); }
    bool is_real_valued() const noexcept { return source_.is_real_valued(); }

    /// Table length M; valid arguments are 1..M.
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()) - 1; }

    /// Unchecked f(n), 1 <= n <= M.
    Complex operator[](std::int64_t n) const noexcept { return values_[static_cast<std::size_t>(n)]; }
    /// Checked f(n); throws RangeError outside 1..M.
    Complex at(std::int64_t n) const;

    /// Storage indexed by n, with element 0 unused (set to 0).
    std::span<const Complex> indexed() const noexcept { return values_; }

private:
    MultiplicativeSpec source_;
    std::vector<Complex> values_;
};

enum class SieveMethod { automatic, linear, segmented };

struct SieveOptions {
    SieveMethod method = SieveMethod::automatic;
    /// Above this length the automatic method switches to the segmented sieve.
    std::int64_t linear_limit = 100'000'000;
    std::int64_t segment_length = 1 << 18;
};

/// Materializes f on [1, M]. Throws DomainViolation if a queried prime power
/// has |f(p^k)| > 1 + 1e-12.
SieveTable sieve_values(const MultiplicativeSpec& spec, std::int64_t M, const SieveOptions& opts = {});

// ---------------------------------------------------------------------------
// Dirichlet characters
// ---------------------------------------------------------------------------

/// One generator of (Z/qZ)^* in the fixed CRT decomposition used to
/// enumerate characters.
struct CharacterComponent {
    std::uint64_t prime_power; // the modulus p^e this component lives on
    std::uint64_t generator;   // generator residue mod p^e
    std::uint64_t order;       // order of the generator
};

/// Generator convention: prime powers in ascending order of p; an odd p^e
/// contributes its least primitive root; 4 contributes -1; 2^e (e >= 3)
/// contributes -1 (order 2) followed by 5 (order 2^{e-2}). The character
/// index is written in mixed radix over these orders, first component least
/// significant, and character `index` sends component c's generator to
/// e(digit_c / order_c). Index 0 is the principal character.
std::vector<CharacterComponent> character_components(std::uint64_t q);

class DirichletCharacter {
public:
    DirichletCharacter(std::uint64_t modulus, std::uint64_t index, std::vector<Complex> table);

    std::uint64_t modulus() const noexcept { return modulus_; }
    std::uint64_t index() const noexcept { return index_; }
    bool is_principal() const noexcept { return index_ == 0; }
    bool is_real() const noexcept { return real_; }

    Complex operator()(std::int64_t n) const noexcept {
        const auto q = static_cast<std::int64_t>(modulus_);
        std::int64_t r = n % q;
        if (r < 0) r += q;
        return table_[static_cast<std::size_t>(r)];
    }
    std::span<const Complex> table() const noexcept { return table_; }

private:
    std::uint64_t modulus_;
    std::uint64_t index_;
    std::vector<Complex> table_;
    bool real_;
};

/// Character number `index` modulo q, 0 <= index < phi(q).
DirichletCharacter dirichlet_character(std::uint64_t q, std::uint64_t index);

// ---------------------------------------------------------------------------
// Builtin functions
// ---------------------------------------------------------------------------

/// Builtin multiplicative functions by name:
///   one, liouville, moebius, parity, two_adic_sign,
///   archimedean(t), character(q,index), random_pm1(seed),
///   twisted(q,index,t)   (character(q,index) times archimedean(t)).
/// Throws InvalidArgument for an unknown or malformed name.
MultiplicativeSpec builtin(std::string_view name);

/// Names accepted by builtin(), with argument placeholders.
std::vector<std::string> builtin_names();

MultiplicativeSpec archimedean(double t);
MultiplicativeSpec character_function(std::uint64_t q, std::uint64_t index);
MultiplicativeSpec random_pm1(std::uint64_t seed);
/// character(q,index) * n^{it}.
MultiplicativeSpec twisted(std::uint64_t q, std::uint64_t index, double t);

/// Pointwise complex conjugate of a multiplicative function.
MultiplicativeSpec conjugate(const MultiplicativeSpec& f);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

} // namespace multavg
