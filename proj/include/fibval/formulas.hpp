#pragma once

// Closed forms for p-adic valuations of Fibonomial coefficients C(m,k)_F.
//
// Every evaluation returns the valuation together with a BranchTrace that
// records which case of which theorem fired and the intermediate symbols
// (r, s, A, delta, epsilon, z(p), ...). Intermediates that the closed forms
// claim to be integers are checked, and each result is also recomputed
// through a second algebraic route (digit-sum vs Legendre-sum forms) with
// any disagreement raised as integrity_error.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fibval/arith.hpp"
#include "fibval/rank.hpp"

namespace fibval {

enum class Theorem {
    T2adic_general,  // nu_2(C(m,k)_F), mod-6 case table
    T5adic,          // nu_5(C(m,k)_F) = nu_5(C(m,k))
    Tp_general_mk,   // odd p != 5, reduction through z(p)
    Tratio,          // nu_p(C(l1 p^b, l2 p^a)_F)
    C2adic,          // nu_2(C(2^a n, n)_F)
    C5adic,          // nu_5(C(5^a n, n)_F)
    Cp,              // nu_p(C(p^a n, n)_F), p != 2, 5
};

std::string_view to_string(Theorem t);

struct BranchTrace {
    Theorem theorem = Theorem::Cp;
    std::string branch_label;  // the case that fired; the unit of coverage
    std::uint64_t r = 0;
    std::uint64_t s = 0;
    std::uint64_t A = 0;
    std::int64_t delta = 0;
    int epsilon = 0;
    std::uint64_t z = 0;
    std::uint64_t nu_fz = 0;
    std::uint64_t b = 0;
    std::optional<std::int64_t> a2;           // A_2 of the mod-6 table
    std::optional<std::uint64_t> m_reduced;   // m' or m_p
    std::optional<std::uint64_t> k_reduced;   // k' or k_p

    /// "<theorem>: <branch_label>", the key used for coverage counting.
    std::string coverage_key() const;
    /// branch_label, with "(r,s)" appended for the mod-6 table.
    std::string display_label() const;
};

struct Evaluation {
    Valuation valuation;
    BranchTrace trace;
};

/// m = p^a n, rejecting anything above 2^63.
std::uint64_t central_index(std::uint64_t p, std::uint64_t a, std::uint64_t n);

// ---------------------------------------------------------------------------
// General m, k

/// nu_p(C(m,k)_F) for any prime p and 0 <= k <= m.
Evaluation nu_fibonomial_formula(std::uint64_t p, std::uint64_t m, std::uint64_t k);

/// nu_p(C(l1 p^b, l2 p^a)_F) for p != 5, b >= a >= 1, l1 p^b > l2 p^a.
Evaluation nu_ratio_prime_powers(std::uint64_t p, std::uint64_t l1, std::uint64_t b, std::uint64_t l2,
                                 std::uint64_t a);

// ---------------------------------------------------------------------------
// Central coefficients C(p^a n, n)_F

/// Case constants of delta in the 2-adic central formula. Exposed so that
/// tests can seed single-constant mutations; production code always uses
/// the default.
struct Nu2DeltaTable {
    std::array<int, 6> even_a{0, 0, 0, 1, 0, 1};  // indexed by n mod 6
    std::array<int, 3> odd_a_odd_n{0, 1, 2};      // n mod 6 = 1, 3, 5
    int odd_a_n0 = 0;                              // n = 0 (mod 6)
    int odd_a_n4_offset = 1;                       // n = 4: ceil(nu_2(n)/2) + offset
    int odd_a_n2_shift = 1;                        // n = 2: ceil((nu_2(n) + shift)/2)

    friend bool operator==(const Nu2DeltaTable&, const Nu2DeltaTable&) = default;
};

inline constexpr Nu2DeltaTable kNu2DeltaTable{};

/// Names of the individual constants of Nu2DeltaTable ("even:3", "odd:n4", ...).
std::vector<std::string> nu2_delta_cases();

/// kNu2DeltaTable with one constant xor-ed with 1. Throws domain_error on an unknown name.
Nu2DeltaTable flip_nu2_delta_case(std::string_view name);

Evaluation nu2_central(std::uint64_t a, std::uint64_t n, const Nu2DeltaTable& table = kNu2DeltaTable);

/// s_5((5^a - 1) n) / 4; always >= 1.
Valuation nu5_central(std::uint64_t a, std::uint64_t n);

/// p prime, p != 2, 5.
Evaluation nup_central(std::uint64_t p, std::uint64_t a, std::uint64_t n);

/// Dispatches to nu2_central / nu5_central / nup_central.
Evaluation central_valuation(std::uint64_t p, std::uint64_t a, std::uint64_t n,
                             const Nu2DeltaTable& table = kNu2DeltaTable);

/// Coverage keys that central queries with this (p, a) can reach: the
/// central theorem's cases plus the general-theorem cases they route through.
std::vector<std::string> central_coverage_keys(std::uint64_t p, std::uint64_t a);

/// Every coverage key of a theorem.
std::vector<std::string> theorem_coverage_keys(Theorem t);

// ---------------------------------------------------------------------------
// Divisibility predicates

bool is_odd_2n(std::uint64_t n);
bool is_odd_4n(std::uint64_t n);
bool is_odd_8n(std::uint64_t n);

/// n = 2^k for some k >= 0.
bool is_power_of_two(std::uint64_t n);
/// 7n - 1 = 3 * 2^k with k = 1 (mod 3).
bool is_one_plus_three_pow2_over_7(std::uint64_t n);

enum class DivisibilityReason {
    p_equals_5,
    z_divides_n,
    r_less_s,
    r_ne_s,
    digit_sum_threshold,
    formula_positive,
    formula_zero,
};

std::string_view to_string(DivisibilityReason r);

struct Divisibility {
    bool divisible = false;
    DivisibilityReason reason = DivisibilityReason::formula_zero;
};

/// Whether p | C(p^a n, n)_F, decided by the applicable divisibility
/// criterion, falling back to the closed-form valuation where none applies.
Divisibility divides_p_central(std::uint64_t p, std::uint64_t a, std::uint64_t n);

}  // namespace fibval
