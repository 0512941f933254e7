#pragma once

// Exact and modular integer primitives shared by every other module:
// Fibonacci numbers, p-adic valuations, Legendre's formula, digit sums,
// and exact rational floor/fraction helpers.
//
// Nothing in this library touches floating point. Quantities that the
// closed forms claim to be integers are checked at runtime and a failed
// check throws fibval::integrity_error.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace fibval {

using BigInt = boost::multiprecision::cpp_int;

/// Largest index m accepted by the fixed-width fast path (2^63).
inline constexpr std::uint64_t kIndexCap = std::uint64_t{1} << 63;

/// Bad caller input: composite "prime", k > m, index over the cap, ...
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A runtime integrality or consistency assertion failed. Always a bug.
class integrity_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

[[noreturn]] void fail_integrity(std::string_view what);

inline void check_integrity(bool ok, std::string_view what) {
    if (!ok) fail_integrity(what);
}

enum class Method { formula, oracle_exact, oracle_modular };

std::string_view to_string(Method m);

/// A p-adic exponent together with the route that produced it.
struct Valuation {
    std::uint64_t value = 0;
    Method method = Method::formula;

    /// Builds a valuation from a signed intermediate, asserting it is >= 0.
    static Valuation from_signed(std::int64_t v, Method m, std::string_view context);

    friend bool operator==(const Valuation&, const Valuation&) = default;
};

// ---------------------------------------------------------------------------
// Checked fixed-width helpers

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

/// a * b, throwing domain_error on uint64 overflow.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

/// base^exp, throwing domain_error on uint64 overflow.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp);

/// (a * b) mod m without overflow.
constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Throws domain_error unless p is prime.
void require_prime(std::uint64_t p, std::string_view what = "p");

// ---------------------------------------------------------------------------
// Fibonacci

/// F_m by fast doubling, F_0 = 0.
BigInt fib(std::uint64_t m);

/// F_m mod modulus by fast doubling; modulus >= 1.
std::uint64_t fib_mod(std::uint64_t m, std::uint64_t modulus);

// ---------------------------------------------------------------------------
// Valuations and digit sums

/// Largest e with p^e | x. Rejects x = 0 and composite p.
Valuation nu(std::uint64_t p, const BigInt& x);
std::uint64_t nu(std::uint64_t p, std::uint64_t x);

/// Sum of the base-q digits of n, q >= 2.
std::uint64_t digit_sum(std::uint64_t q, std::uint64_t n);

/// nu_p(n!) = (n - s_p(n)) / (p - 1).
Valuation nu_factorial(std::uint64_t p, std::uint64_t n);

/// nu_p(n!) as the finite sum floor(n/p) + floor(n/p^2) + ...
std::uint64_t legendre_sum(std::uint64_t p, std::uint64_t n);

/// nu_p of the ordinary binomial coefficient C(m, k), 0 <= k <= m.
std::uint64_t nu_binomial(std::uint64_t p, std::uint64_t m, std::uint64_t k);

// ---------------------------------------------------------------------------
// Exact rationals for floor / fractional-part bookkeeping

/// num / den with den > 0, kept in lowest terms.
class Fraction {
public:
    Fraction() = default;
    Fraction(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    /// Largest integer <= value.
    std::int64_t floor() const;
    /// Smallest integer >= value.
    std::int64_t ceil() const;
    /// value - floor(value), in [0, 1).
    Fraction frac() const;
    bool is_integer() const { return den_ == 1; }

    /// The integer value; throws integrity_error if not integral.
    std::int64_t as_integer(std::string_view context) const;

    friend Fraction operator+(const Fraction& x, const Fraction& y);
    friend Fraction operator-(const Fraction& x, const Fraction& y);
    friend Fraction operator*(const Fraction& x, const Fraction& y);
    friend Fraction operator/(const Fraction& x, const Fraction& y);
    Fraction operator-() const { return Fraction(-num_, den_); }

    friend bool operator==(const Fraction&, const Fraction&) = default;
    friend std::strong_ordering operator<=>(const Fraction& x, const Fraction& y);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// floor(a / b) for b > 0, any sign of a.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && a < 0) ? q - 1 : q;
}

/// ceil(a / b) for b > 0.
constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return -floor_div(-a, b);
}

/// nu_p(floor(l p^a / m)!) by the closed form valid when p = +-1 (mod m).
/// Rejects m with p not congruent to +-1.
Valuation nu_floor_factorial(std::uint64_t p, std::uint64_t a, std::uint64_t l, std::uint64_t m);

}  // namespace fibval
