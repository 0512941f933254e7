#pragma once

// Brute-force ground truth for nu_p(C(m,k)_F). Two independent routes:
//
//   exact    builds the Fibonomial coefficient as a big integer from its
//            defining product and factors out p.
//   modular  sums nu_p(F_i) over the numerator and denominator factors,
//            finding each nu_p(F_i) by testing F_i mod p^e = 0.
//
// This module must not depend on the closed forms in formulas.hpp.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fibval/arith.hpp"

namespace fibval {

enum class OracleTier { exact, modular };

std::string_view to_string(OracleTier t);

inline constexpr std::uint64_t kDefaultExactCap = 400;
inline constexpr std::uint64_t kModularCap = 10'000'000;

/// Tier-A cap: FIBVAL_EXACT_CAP from the environment, else 400.
std::uint64_t exact_cap();

/// C(m,k)_F from F_{m-k+1}...F_m / (F_1...F_k), asserting the division is exact.
BigInt fibonomial_exact(std::uint64_t m, std::uint64_t k);

/// C(m,0)_F ... C(m,m)_F via C(m,j)_F = C(m,j-1)_F F_{m-j+1} / F_j,
/// asserting each step divides exactly.
std::vector<BigInt> fibonomial_row(std::uint64_t m);

/// nu_p(F_i) by raising e until F_i mod p^e != 0. i >= 1.
std::uint64_t nu_fib_modular(std::uint64_t p, std::uint64_t i);

Valuation nu_fibonomial_oracle(std::uint64_t p, std::uint64_t m, std::uint64_t k, OracleTier tier);

/// Tier-B oracle with nu_p(F_i) prefix sums precomputed for i <= max_index,
/// so each query is O(1). Same answers as nu_fibonomial_oracle(..., modular).
class ModularOracle {
public:
    ModularOracle(std::uint64_t p, std::uint64_t max_index);

    std::uint64_t p() const { return p_; }
    std::uint64_t max_index() const { return prefix_.size() - 1; }
    Valuation nu_fibonomial(std::uint64_t m, std::uint64_t k) const;

private:
    std::uint64_t p_;
    std::vector<std::uint64_t> prefix_;  // prefix_[i] = sum_{j<=i} nu_p(F_j)
};

/// Tier-A oracle that builds whole rows once and memoizes the most recent one.
class ExactOracle {
public:
    explicit ExactOracle(std::uint64_t cap = exact_cap()) : cap_(cap) {}

    std::uint64_t cap() const { return cap_; }
    Valuation nu_fibonomial(std::uint64_t p, std::uint64_t m, std::uint64_t k);
    const BigInt& fibonomial(std::uint64_t m, std::uint64_t k);

private:
    std::uint64_t cap_;
    std::optional<std::uint64_t> row_index_;
    std::vector<BigInt> row_;
};

}  // namespace fibval
