#include <doctest.h>

#include <random>
#include <vector>

#include "fibval/arith.hpp"

using namespace fibval;

namespace {

// Plain sieve, independent of is_prime.
std::vector<bool> sieve(std::size_t n) {
    std::vector<bool> prime(n + 1, true);
    prime[0] = prime[1] = false;
    for (std::size_t i = 2; i * i <= n; ++i)
        if (prime[i])
            for (std::size_t j = i * i; j <= n; j += i) prime[j] = false;
    return prime;
}

std::uint64_t summed_legendre(std::uint64_t p, std::uint64_t n) {
    std::uint64_t total = 0;
    for (std::uint64_t pk = p; pk <= n; pk *= p) total += n / pk;
    return total;
}

}  // namespace

TEST_CASE("fib examples") {
    CHECK(fib(0) == 0);
    CHECK(fib(1) == 1);
    CHECK(fib(2) == 1);
    CHECK(fib(10) == 55);
    CHECK(fib(12) == 144);
    CHECK(fib(100) == BigInt("354224848179261915075"));
}

TEST_CASE("fast doubling matches the recurrence up to 10^4") {
    BigInt prev = 0, cur = 1;  // F_0, F_1
    for (std::uint64_t n = 2; n <= 10'000; ++n) {
        BigInt next = prev + cur;
        prev = std::move(cur);
        cur = std::move(next);
        REQUIRE(fib(n) == cur);
    }
}

TEST_CASE("fib_mod examples") {
    CHECK(fib_mod(10, 7) == 6);
    CHECK(fib_mod(0, 5) == 0);
    CHECK(fib_mod(12, 144) == 0);
    CHECK(fib_mod(12, 1) == 0);
    CHECK_THROWS_AS(fib_mod(3, 0), domain_error);
}

TEST_CASE("fib_mod agrees with fib mod M for sampled moduli") {
    std::mt19937_64 rng(20261016);
    std::uniform_int_distribution<std::uint64_t> modulus(2, 1'000'000);
    BigInt prev = 0, cur = 1;
    for (std::uint64_t n = 1; n <= 10'000; ++n) {
        const std::uint64_t M = modulus(rng);
        REQUIRE(fib_mod(n, M) == static_cast<std::uint64_t>(cur % M));
        BigInt next = prev + cur;
        prev = std::move(cur);
        cur = std::move(next);
    }
    // Moduli near 2^64 exercise the 128-bit products.
    const std::uint64_t big = 18446744073709551557ull;  // largest 64-bit prime
    CHECK(fib_mod(1000, big) == static_cast<std::uint64_t>(fib(1000) % big));
}

TEST_CASE("nu examples and errors") {
    CHECK(nu(2, BigInt(40)).value == 3);
    CHECK(nu(7, BigInt(21)).value == 1);
    CHECK(nu(3, BigInt(4641)).value == 1);
    CHECK(nu(2, 40) == 3);
    CHECK(nu(5, BigInt(-250)).value == 3);
    CHECK_THROWS_AS(nu(2, BigInt(0)), domain_error);
    CHECK_THROWS_AS(nu(3, 0), domain_error);
    CHECK_THROWS_AS(nu(4, 16), domain_error);
}

TEST_CASE("digit_sum examples") {
    CHECK(digit_sum(2, 10) == 2);
    CHECK(digit_sum(5, 24) == 8);
    CHECK(digit_sum(7, 0) == 0);
    CHECK_THROWS_AS(digit_sum(1, 5), domain_error);
}

TEST_CASE("nu_factorial examples") {
    CHECK(nu_factorial(2, 10).value == 8);
    CHECK(nu_factorial(5, 25).value == 6);
    CHECK(nu_factorial(3, 1).value == 0);
    CHECK(nu_factorial(3, 0).value == 0);
}

TEST_CASE("Legendre: digit form equals independent summation") {
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
        for (std::uint64_t n = 0; n <= 100'000; ++n) {
            const std::uint64_t expected = summed_legendre(p, n);
            REQUIRE(nu_factorial(p, n).value == expected);
            REQUIRE(legendre_sum(p, n) == expected);
            REQUIRE((n - digit_sum(p, n)) / (p - 1) == expected);
        }
    }
}

TEST_CASE("is_prime agrees with a sieve and known large values") {
    const auto prime = sieve(100'000);
    for (std::uint64_t n = 0; n <= 100'000; ++n) REQUIRE(is_prime(n) == prime[n]);
    CHECK(is_prime(18446744073709551557ull));
    CHECK_FALSE(is_prime(18446744073709551557ull - 2));
    CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK(is_prime(1'000'000'007ull));
}

TEST_CASE("checked arithmetic") {
    CHECK(checked_pow(2, 63) == kIndexCap);
    CHECK_THROWS_AS(checked_pow(2, 64), domain_error);
    CHECK_THROWS_AS(checked_mul(1ull << 40, 1ull << 30), domain_error);
    CHECK(mul_mod(~0ull, ~0ull, 1'000'000'007ull) == static_cast<std::uint64_t>(
                                                         (static_cast<u128>(~0ull) * ~0ull) %
                                                         1'000'000'007ull));
}

TEST_CASE("Fraction floor, ceil and fractional part") {
    CHECK(Fraction(7, 3).floor() == 2);
    CHECK(Fraction(-7, 3).floor() == -3);
    CHECK(Fraction(-7, 3).ceil() == -2);
    CHECK(Fraction(-7, 3).frac() == Fraction(2, 3));
    CHECK(Fraction(6, -4) == Fraction(-3, 2));
    CHECK(Fraction(4, 2).as_integer("test") == 2);
    CHECK_THROWS_AS(Fraction(1, 2).as_integer("test"), integrity_error);
    CHECK_THROWS_AS(Fraction(1, 0), domain_error);
    CHECK(Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2));
    CHECK(Fraction(1, 3) < Fraction(1, 2));
}

TEST_CASE("floor-function identities over exact rationals") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> num(-100'000, 100'000);
    std::uniform_int_distribution<std::int64_t> den(1, 1000);
    std::uniform_int_distribution<std::int64_t> small(-50, 50);
    for (int i = 0; i < 20'000; ++i) {
        const Fraction x(num(rng), den(rng)), y(num(rng), den(rng));
        const std::int64_t k = small(rng);

        // floor(k + x) = k + floor(x), {k + x} = {x}
        REQUIRE((Fraction(k) + x).floor() == k + x.floor());
        REQUIRE((Fraction(k) + x).frac() == x.frac());
        // floor(x) + floor(-x) is 0 for integers and -1 otherwise
        REQUIRE(x.floor() + (-x).floor() == (x.is_integer() ? 0 : -1));
        // 0 <= {x} < 1, {x} = 0 iff x integral
        REQUIRE(x.frac() >= Fraction(0));
        REQUIRE(x.frac() < Fraction(1));
        REQUIRE((x.frac() == Fraction(0)) == x.is_integer());
        // floor(x + y) - floor(x) - floor(y) in {0, 1}, 1 iff {x} + {y} >= 1
        const std::int64_t carry = (x + y).floor() - x.floor() - y.floor();
        REQUIRE(carry == (x.frac() + y.frac() >= Fraction(1) ? 1 : 0));
        // floor(floor(x) / k) = floor(x / k) for k >= 1
        const std::int64_t kk = k < 1 ? 1 - k : k;
        REQUIRE(floor_div(x.floor(), kk) == (x / Fraction(kk)).floor());
    }
}

TEST_CASE("nu_floor_factorial examples") {
    CHECK(nu_floor_factorial(3, 2, 1, 4).value == 0);
    CHECK(nu_floor_factorial(5, 1, 1, 4).value == 0);
    CHECK(nu_floor_factorial(3, 0, 7, 4).value == nu_factorial(3, 1).value);
    CHECK_THROWS_AS(nu_floor_factorial(7, 1, 1, 5), domain_error);
    CHECK_THROWS_AS(nu_floor_factorial(7, 1, 1, 0), domain_error);
}

TEST_CASE("nu_floor_factorial matches Legendre on the full grid") {
    std::size_t cells = 0;
    bool seen_plus = false, seen_minus_even = false, seen_minus_odd = false;
    for (std::uint64_t p : {2, 3, 7, 11, 13, 17, 19}) {
        for (std::uint64_t m = 1; m <= 20; ++m) {
            const bool plus = p % m == 1 % m;
            const bool minus = (p + 1) % m == 0;
            if (!plus && !minus) {
                CHECK_THROWS_AS(nu_floor_factorial(p, 1, 1, m), domain_error);
                continue;
            }
            for (std::uint64_t a = 0; a <= 6; ++a) {
                const std::uint64_t pa = checked_pow(p, a);
                for (std::uint64_t l = 0; l <= 200; ++l) {
                    REQUIRE(nu_floor_factorial(p, a, l, m).value == summed_legendre(p, l * pa / m));
                    ++cells;
                }
                seen_plus |= plus;
                seen_minus_even |= !plus && a % 2 == 0;
                seen_minus_odd |= !plus && a % 2 == 1;
            }
        }
    }
    CHECK(cells > 50'000);
    CHECK(seen_plus);
    CHECK(seen_minus_even);
    CHECK(seen_minus_odd);
}

TEST_CASE("Valuation rejects negative intermediates") {
    CHECK(Valuation::from_signed(3, Method::formula, "t").value == 3);
    CHECK_THROWS_AS(Valuation::from_signed(-1, Method::formula, "t"), integrity_error);
}
