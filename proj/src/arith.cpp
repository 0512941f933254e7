#include "fibval/arith.hpp"

#include <array>
#include <limits>
#include <numeric>
#include <string>

namespace fibval {

void fail_integrity(std::string_view what) {
    throw integrity_error("integrity check failed: " + std::string(what));
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::formula: return "formula";
        case Method::oracle_exact: return "oracle_exact";
        case Method::oracle_modular: return "oracle_modular";
    }
    return "unknown";
}

Valuation Valuation::from_signed(std::int64_t v, Method m, std::string_view context) {
    if (v < 0) fail_integrity(std::string(context) + ": negative valuation " + std::to_string(v));
    return Valuation{static_cast<std::uint64_t>(v), m};
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw domain_error("64-bit overflow in " + std::to_string(a) + " * " + std::to_string(b));
    return out;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

constexpr std::array<std::uint64_t, 12> kSmallPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : kSmallPrimes) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    if (n < 41 * 41) return true;

    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // The first twelve primes are a deterministic witness set below 3.3e24.
    for (std::uint64_t w : kSmallPrimes) {
        std::uint64_t x = pow_mod(w, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
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

void require_prime(std::uint64_t p, std::string_view what) {
    if (!is_prime(p))
        throw domain_error(std::string(what) + " = " + std::to_string(p) + " is not prime");
}

BigInt fib(std::uint64_t m) {
    // (a, b) = (F_k, F_{k+1}), walking the bits of m from the top.
    BigInt a = 0, b = 1;
    for (int bit = 63; bit >= 0; --bit) {
        BigInt c = a * (2 * b - a);
        BigInt d = a * a + b * b;
        if ((m >> bit) & 1) {
            a = d;
            b = c + d;
        } else {
            a = std::move(c);
            b = std::move(d);
        }
    }
    return a;
}

std::uint64_t fib_mod(std::uint64_t m, std::uint64_t modulus) {
    if (modulus == 0) throw domain_error("fib_mod: modulus must be >= 1");
    if (modulus == 1) return 0;
    std::uint64_t a = 0, b = 1;
    int top = 63;
    while (top >= 0 && ((m >> top) & 1) == 0) --top;
    for (int bit = top; bit >= 0; --bit) {
        // F_2k = F_k (2 F_{k+1} - F_k), F_2k+1 = F_k^2 + F_{k+1}^2
        std::uint64_t two_b = b >= modulus - b ? b - (modulus - b) : b + b;
        std::uint64_t diff = two_b >= a ? two_b - a : two_b + (modulus - a);
        std::uint64_t c = mul_mod(a, diff, modulus);
        std::uint64_t aa = mul_mod(a, a, modulus);
        std::uint64_t bb = mul_mod(b, b, modulus);
        std::uint64_t d = aa >= modulus - bb ? aa - (modulus - bb) : aa + bb;
        if ((m >> bit) & 1) {
            a = d;
            b = c >= modulus - d ? c - (modulus - d) : c + d;
        } else {
            a = c;
            b = d;
        }
    }
    return a;
}

Valuation nu(std::uint64_t p, const BigInt& x) {
    require_prime(p);
    if (x == 0) throw domain_error("nu: valuation of 0 is infinite");
    BigInt y = abs(x);
    std::uint64_t e = 0;
    BigInt q, r;
    for (;;) {
        divide_qr(y, BigInt(p), q, r);
        if (r != 0) break;
        y = std::move(q);
        ++e;
    }
    return Valuation{e, Method::formula};
}

std::uint64_t nu(std::uint64_t p, std::uint64_t x) {
    require_prime(p);
    if (x == 0) throw domain_error("nu: valuation of 0 is infinite");
    std::uint64_t e = 0;
    while (x % p == 0) {
        x /= p;
        ++e;
    }
    return e;
}

std::uint64_t digit_sum(std::uint64_t q, std::uint64_t n) {
    if (q < 2) throw domain_error("digit_sum: base must be >= 2");
    std::uint64_t s = 0;
    while (n) {
        s += n % q;
        n /= q;
    }
    return s;
}

Valuation nu_factorial(std::uint64_t p, std::uint64_t n) {
    require_prime(p);
    std::uint64_t diff = n - digit_sum(p, n);
    check_integrity(diff % (p - 1) == 0, "Legendre: p - 1 divides n - s_p(n)");
    return Valuation{diff / (p - 1), Method::formula};
}

std::uint64_t legendre_sum(std::uint64_t p, std::uint64_t n) {
    require_prime(p);
    std::uint64_t total = 0;
    while (n) {
        n /= p;
        total += n;
    }
    return total;
}

std::uint64_t nu_binomial(std::uint64_t p, std::uint64_t m, std::uint64_t k) {
    if (k > m) throw domain_error("nu_binomial: k > m");
    std::uint64_t top = nu_factorial(p, m).value;
    std::uint64_t bottom = nu_factorial(p, k).value + nu_factorial(p, m - k).value;
    check_integrity(top >= bottom, "binomial valuation is nonnegative");
    return top - bottom;
}

// ---------------------------------------------------------------------------
// Fraction

namespace {

std::int64_t narrow(i128 v, std::string_view what) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw domain_error("64-bit overflow in rational " + std::string(what));
    return static_cast<std::int64_t>(v);
}

Fraction make_fraction(i128 num, i128 den) {
    if (den == 0) throw domain_error("Fraction: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num, b = den;
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return Fraction(narrow(num, "numerator"), narrow(den, "denominator"));
}

}  // namespace

Fraction::Fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) throw domain_error("Fraction: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::int64_t Fraction::floor() const { return floor_div(num_, den_); }

std::int64_t Fraction::ceil() const { return ceil_div(num_, den_); }

Fraction Fraction::frac() const { return Fraction(num_ - floor() * den_, den_); }

std::int64_t Fraction::as_integer(std::string_view context) const {
    if (den_ != 1)
        fail_integrity(std::string(context) + ": expected an integer, got " + std::to_string(num_) +
                       "/" + std::to_string(den_));
    return num_;
}

Fraction operator+(const Fraction& x, const Fraction& y) {
    return make_fraction(static_cast<i128>(x.num_) * y.den_ + static_cast<i128>(y.num_) * x.den_,
                         static_cast<i128>(x.den_) * y.den_);
}

Fraction operator-(const Fraction& x, const Fraction& y) { return x + (-y); }

Fraction operator*(const Fraction& x, const Fraction& y) {
    return make_fraction(static_cast<i128>(x.num_) * y.num_, static_cast<i128>(x.den_) * y.den_);
}

Fraction operator/(const Fraction& x, const Fraction& y) {
    return make_fraction(static_cast<i128>(x.num_) * y.den_, static_cast<i128>(x.den_) * y.num_);
}

std::strong_ordering operator<=>(const Fraction& x, const Fraction& y) {
    return static_cast<i128>(x.num_) * y.den_ <=> static_cast<i128>(y.num_) * x.den_;
}

// ---------------------------------------------------------------------------

Valuation nu_floor_factorial(std::uint64_t p, std::uint64_t a, std::uint64_t l, std::uint64_t m) {
    require_prime(p);
    if (m == 0) throw domain_error("nu_floor_factorial: m must be >= 1");
    const bool plus_one = p % m == 1 % m;
    const bool minus_one = (p + 1) % m == 0;
    if (!plus_one && !minus_one)
        throw domain_error("nu_floor_factorial: p = " + std::to_string(p) + " is not +-1 mod " +
                           std::to_string(m));

    // (p^a - 1) / (p - 1) = 1 + p + ... + p^(a-1)
    std::uint64_t geometric = 0;
    for (std::uint64_t i = 0; i < a; ++i) geometric = checked_mul(geometric, p) + 1;
    const auto lg = static_cast<std::int64_t>(checked_mul(l, geometric));
    const auto sm = static_cast<std::int64_t>(m);
    const auto sa = static_cast<std::int64_t>(a);

    const Fraction main_term(lg, sm);  // l (p^a - 1) / (m (p - 1))
    const Fraction frac_lm = Fraction(static_cast<std::int64_t>(l), sm).frac();
    const std::int64_t delta = l % m != 0 ? 1 : 0;
    const auto tail = static_cast<std::int64_t>(nu_factorial(p, l / m).value);

    std::int64_t head = 0;
    if (plus_one) {
        head = (main_term - Fraction(sa) * frac_lm).as_integer("floor-factorial, p = 1 mod m");
    } else if (a % 2 == 0) {
        head = main_term.as_integer("floor-factorial, p = -1 mod m, a even") - (sa / 2) * delta;
    } else {
        head = (main_term - frac_lm).as_integer("floor-factorial, p = -1 mod m, a odd") -
               ((sa - 1) / 2) * delta;
    }
    return Valuation::from_signed(head + tail, Method::formula, "nu_floor_factorial");
}

}  // namespace fibval
