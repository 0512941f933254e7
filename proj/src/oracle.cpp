#include "fibval/oracle.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>
#include <string>

namespace fibval {

namespace {

constexpr std::uint64_t kMaxExponent = 64;

void check_pair(std::uint64_t m, std::uint64_t k) {
    if (m == 0) throw domain_error("Fibonomial index m must be >= 1");
    if (k > m) throw domain_error("Fibonomial requires 0 <= k <= m");
}

void check_exact_cap(std::uint64_t m, std::uint64_t cap) {
    if (m > cap)
        throw domain_error("exact oracle: m = " + std::to_string(m) + " exceeds cap " + std::to_string(cap));
}

}  // namespace

std::string_view to_string(OracleTier t) {
    return t == OracleTier::exact ? "exact" : "modular";
}

std::uint64_t exact_cap() {
    const char* env = std::getenv("FIBVAL_EXACT_CAP");
    if (!env || !*env) return kDefaultExactCap;
    std::uint64_t v = 0;
    std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0)
        throw domain_error("FIBVAL_EXACT_CAP must be a positive integer, got '" + std::string(s) + "'");
    return v;
}

BigInt fibonomial_exact(std::uint64_t m, std::uint64_t k) {
    check_pair(m, k);
    check_exact_cap(m, exact_cap());
    BigInt num = 1, den = 1;
    for (std::uint64_t i = m - k + 1; i <= m; ++i) num *= fib(i);
    for (std::uint64_t i = 1; i <= k; ++i) den *= fib(i);
    BigInt q, r;
    divide_qr(num, den, q, r);
    check_integrity(r == 0, "Fibonomial product divides exactly");
    return q;
}

std::vector<BigInt> fibonomial_row(std::uint64_t m) {
    if (m == 0) throw domain_error("Fibonomial index m must be >= 1");
    std::vector<BigInt> fibs(m + 1);
    fibs[0] = 0;
    if (m >= 1) fibs[1] = 1;
    for (std::uint64_t i = 2; i <= m; ++i) fibs[i] = fibs[i - 1] + fibs[i - 2];

    std::vector<BigInt> row(m + 1);
    row[0] = 1;
    BigInt q, r;
    for (std::uint64_t j = 1; j <= m; ++j) {
        divide_qr(BigInt(row[j - 1] * fibs[m - j + 1]), fibs[j], q, r);
        check_integrity(r == 0, "Fibonomial row step divides exactly");
        row[j] = q;
    }
    return row;
}

std::uint64_t nu_fib_modular(std::uint64_t p, std::uint64_t i) {
    if (i == 0) throw domain_error("nu_p(F_0) is infinite");
    std::uint64_t e = 0;
    std::uint64_t modulus = 1;
    for (;;) {
        if (modulus > std::numeric_limits<std::uint64_t>::max() / p)
            throw domain_error("modular oracle: p^e exceeds 64 bits");
        modulus *= p;
        if (fib_mod(i, modulus) != 0) return e;
        ++e;
        if (e > kMaxExponent) fail_integrity("modular oracle: exponent cap exceeded");
    }
}

Valuation nu_fibonomial_oracle(std::uint64_t p, std::uint64_t m, std::uint64_t k, OracleTier tier) {
    require_prime(p);
    check_pair(m, k);
    if (tier == OracleTier::exact) {
        check_exact_cap(m, exact_cap());
        Valuation v = nu(p, fibonomial_exact(m, k));
        v.method = Method::oracle_exact;
        return v;
    }
    if (m > kModularCap)
        throw domain_error("modular oracle: m = " + std::to_string(m) + " exceeds cap " +
                           std::to_string(kModularCap));
    std::int64_t total = 0;
    for (std::uint64_t i = m - k + 1; i <= m; ++i) total += static_cast<std::int64_t>(nu_fib_modular(p, i));
    for (std::uint64_t i = 1; i <= k; ++i) total -= static_cast<std::int64_t>(nu_fib_modular(p, i));
    return Valuation::from_signed(total, Method::oracle_modular, "modular oracle");
}

ModularOracle::ModularOracle(std::uint64_t p, std::uint64_t max_index) : p_(p) {
    require_prime(p);
    if (max_index > kModularCap)
        throw domain_error("modular oracle: max index " + std::to_string(max_index) + " exceeds cap " +
                           std::to_string(kModularCap));
    prefix_.resize(max_index + 1);
    prefix_[0] = 0;
    for (std::uint64_t i = 1; i <= max_index; ++i) prefix_[i] = prefix_[i - 1] + nu_fib_modular(p, i);
}

Valuation ModularOracle::nu_fibonomial(std::uint64_t m, std::uint64_t k) const {
    check_pair(m, k);
    if (m > max_index())
        throw domain_error("modular oracle: m = " + std::to_string(m) + " beyond precomputed range");
    const auto total = static_cast<std::int64_t>(prefix_[m] - prefix_[m - k]) -
                       static_cast<std::int64_t>(prefix_[k]);
    return Valuation::from_signed(total, Method::oracle_modular, "modular oracle");
}

const BigInt& ExactOracle::fibonomial(std::uint64_t m, std::uint64_t k) {
    check_pair(m, k);
    check_exact_cap(m, cap_);
    if (row_index_ != m) {
        row_ = fibonomial_row(m);
        row_index_ = m;
    }
    return row_[k];
}

Valuation ExactOracle::nu_fibonomial(std::uint64_t p, std::uint64_t m, std::uint64_t k) {
    Valuation v = nu(p, fibonomial(m, k));
    v.method = Method::oracle_exact;
    return v;
}

}  // namespace fibval
