#include "fibval/formulas.hpp"

#include <string>

namespace fibval {

namespace {

using i64 = std::int64_t;
using u64 = std::uint64_t;

i64 as_signed(u64 v) { return static_cast<i64>(v); }

int iverson(bool b) { return b ? 1 : 0; }

// nu_p(x) where the closed form guarantees x != 0.
u64 nu_nonzero(u64 p, u64 x, std::string_view context) {
    if (x == 0) fail_integrity(std::string(context) + ": valuation argument is zero");
    return nu(p, x);
}

u64 ceil_half(u64 x) { return (x + 1) / 2; }

Evaluation trivial_evaluation(Theorem t) {
    Evaluation e;
    e.valuation = Valuation{0, Method::formula};
    e.trace.theorem = t;
    e.trace.branch_label = "k = 0 or k = m";
    return e;
}

Theorem general_theorem_for(u64 p) {
    if (p == 2) return Theorem::T2adic_general;
    if (p == 5) return Theorem::T5adic;
    return Theorem::Tp_general_mk;
}

// ----- mod-6 table for nu_2(C(m,k)_F) --------------------------------------

bool in_pairs(u64 r, u64 s, std::initializer_list<std::pair<u64, u64>> pairs) {
    for (auto [pr, ps] : pairs)
        if (pr == r && ps == s) return true;
    return false;
}

Evaluation nu2_general(u64 m, u64 k) {
    Evaluation e;
    BranchTrace& t = e.trace;
    t.theorem = Theorem::T2adic_general;
    t.r = m % 6;
    t.s = k % 6;
    t.z = 3;
    t.nu_fz = 1;
    const i64 a2 = as_signed(nu_factorial(2, m / 6).value) - as_signed(nu_factorial(2, k / 6).value) -
                   as_signed(nu_factorial(2, (m - k) / 6).value);
    t.a2 = a2;

    const u64 r = t.r, s = t.s;
    const bool up_exceptional = in_pairs(r, s, {{3, 1}, {3, 2}, {4, 2}});
    const bool down_exceptional = in_pairs(r, s, {{0, 3}, {1, 3}, {2, 3}, {1, 4}, {2, 4}, {2, 5}});
    const bool cases[4] = {
        r >= s && !up_exceptional,
        up_exceptional,
        r < s && !down_exceptional,
        down_exceptional,
    };
    constexpr std::array<int, 4> offsets{0, 1, 3, 2};
    constexpr std::array<std::string_view, 4> labels{"r>=s", "r>=s exceptional", "r<s", "r<s exceptional"};
    int matched = -1, count = 0;
    for (int i = 0; i < 4; ++i)
        if (cases[i]) {
            matched = i;
            ++count;
        }
    check_integrity(count == 1, "mod-6 table: exactly one case matches (r,s)");
    t.branch_label = labels[matched];
    e.valuation = Valuation::from_signed(a2 + offsets[matched], Method::formula, "nu_2 mod-6 table");
    return e;
}

Evaluation nup_general(u64 p, u64 m, u64 k) {
    const RankRecord rank = rank_of_apparition(p);
    Evaluation e;
    BranchTrace& t = e.trace;
    t.theorem = Theorem::Tp_general_mk;
    t.z = rank.z;
    t.nu_fz = rank.nu_fz;
    t.r = m % rank.z;
    t.s = k % rank.z;
    t.m_reduced = m / rank.z;
    t.k_reduced = k / rank.z;
    u64 value = nu_binomial(p, *t.m_reduced, *t.k_reduced);
    if (t.r < t.s) {
        value += nu_nonzero(p, (m - k + rank.z) / rank.z, "general odd-p reduction") + rank.nu_fz;
        t.branch_label = "r<s";
    } else {
        t.branch_label = "r>=s";
    }
    e.valuation = Valuation{value, Method::formula};
    return e;
}

}  // namespace

std::string_view to_string(Theorem t) {
    switch (t) {
        case Theorem::T2adic_general: return "T2adic_general";
        case Theorem::T5adic: return "T5adic";
        case Theorem::Tp_general_mk: return "Tp_general_mk";
        case Theorem::Tratio: return "Tratio";
        case Theorem::C2adic: return "C2adic";
        case Theorem::C5adic: return "C5adic";
        case Theorem::Cp: return "Cp";
    }
    return "unknown";
}

std::string BranchTrace::coverage_key() const {
    return std::string(to_string(theorem)) + ": " + branch_label;
}

std::string BranchTrace::display_label() const {
    if (theorem != Theorem::T2adic_general || branch_label == "k = 0 or k = m") return branch_label;
    return branch_label + ", (" + std::to_string(r) + "," + std::to_string(s) + ")";
}

u64 central_index(u64 p, u64 a, u64 n) {
    if (a == 0) throw domain_error("central coefficients need a >= 1");
    if (n == 0) throw domain_error("central coefficients need n >= 1");
    u64 m = 0;
    try {
        m = checked_mul(checked_pow(p, a), n);
    } catch (const domain_error&) {
        throw domain_error("index p^a n exceeds 2^63");
    }
    if (m > kIndexCap) throw domain_error("index p^a n = " + std::to_string(m) + " exceeds 2^63");
    return m;
}

Evaluation nu_fibonomial_formula(u64 p, u64 m, u64 k) {
    require_prime(p);
    if (m == 0) throw domain_error("nu_fibonomial_formula: m must be >= 1");
    if (k > m) throw domain_error("nu_fibonomial_formula: k must satisfy 0 <= k <= m");
    if (m > kIndexCap) throw domain_error("nu_fibonomial_formula: m exceeds 2^63");
    if (k == 0 || k == m) return trivial_evaluation(general_theorem_for(p));

    if (p == 2) return nu2_general(m, k);
    if (p == 5) {
        Evaluation e;
        e.trace.theorem = Theorem::T5adic;
        e.trace.branch_label = "binomial reduction";
        e.trace.z = 5;
        e.trace.nu_fz = 1;
        e.valuation = Valuation{nu_binomial(5, m, k), Method::formula};
        return e;
    }
    return nup_general(p, m, k);
}

// ---------------------------------------------------------------------------

Evaluation nu_ratio_prime_powers(u64 p, u64 l1, u64 b, u64 l2, u64 a) {
    require_prime(p);
    if (p == 5) throw domain_error("nu_ratio_prime_powers: p must not be 5");
    if (l1 == 0 || l2 == 0 || a == 0 || b == 0)
        throw domain_error("nu_ratio_prime_powers: l1, b, l2, a must be positive");
    if (b < a) throw domain_error("nu_ratio_prime_powers: requires b >= a");
    const u64 top = checked_mul(l1, checked_pow(p, b));
    const u64 bottom = checked_mul(l2, checked_pow(p, a));
    if (top > kIndexCap) throw domain_error("nu_ratio_prime_powers: index exceeds 2^63");
    if (top <= bottom) throw domain_error("nu_ratio_prime_powers: requires l1 p^b > l2 p^a");

    const RankRecord rank = rank_of_apparition(p);
    const u64 z = rank.z;
    const u64 mp = checked_mul(l1, checked_pow(p, b - a)) / z;
    const u64 kp = l2 / z;

    Evaluation e;
    BranchTrace& t = e.trace;
    t.theorem = Theorem::Tratio;
    t.z = z;
    t.nu_fz = rank.nu_fz;
    t.b = b;
    t.m_reduced = mp;
    t.k_reduced = kp;
    t.r = top % z;
    t.s = bottom % z;

    const i64 binom = as_signed(nu_binomial(p, mp, kp));
    auto nu_diff = [&] { return as_signed(nu_nonzero(p, mp - kp, "ratio theorem, m_p - k_p")); };
    const i64 sa = as_signed(a);

    i64 value = 0;
    int matched = 0;
    std::string_view label;
    auto take = [&](bool applies, std::string_view lbl, auto compute) {
        if (!applies) return;
        ++matched;
        label = lbl;
        value = compute();
    };

    if (p == 2) {
        const u64 r1 = l1 % 3, r2 = l2 % 3;
        if ((a % 2) == (b % 2)) {
            take(r1 == r2 || r2 == 0, "same parity; l1=l2 or l2=0 (mod 3)", [&] { return binom; });
            take(r1 == 0 && r2 != 0, "same parity; l1=0, l2!=0 (mod 3)",
                 [&] { return sa + 2 + nu_diff() + binom; });
            take(r1 == 1 && r2 == 2, "same parity; l1=1, l2=2 (mod 3)",
                 [&] { return as_signed(ceil_half(a)) + 1 + nu_diff() + binom; });
            take(r1 == 2 && r2 == 1, "same parity; l1=2, l2=1 (mod 3)",
                 [&] { return as_signed(ceil_half(a + 1)) + binom; });
        } else {
            take((r1 + r2) % 3 == 0 || r2 == 0, "opposite parity; l1=-l2 or l2=0 (mod 3)",
                 [&] { return binom; });
            take(r1 == 0 && r2 != 0, "opposite parity; l1=0, l2!=0 (mod 3)",
                 [&] { return sa + 2 + nu_diff() + binom; });
            take(r1 == 1 && r2 == 1, "opposite parity; l1=l2=1 (mod 3)",
                 [&] { return as_signed(ceil_half(a + 1)) + binom; });
            take(r1 == 2 && r2 == 2, "opposite parity; l1=l2=2 (mod 3)",
                 [&] { return as_signed(ceil_half(a)) + 1 + nu_diff() + binom; });
        }
    } else if (congruence_class_mod5(p) == Mod5Class::plus_minus_1) {
        take(t.r >= t.s, "+-1 mod 5; r>=s", [&] { return binom; });
        take(t.r < t.s, "+-1 mod 5; r<s", [&] { return sa + nu_diff() + as_signed(rank.nu_fz) + binom; });
    } else {
        const bool l1_zero = l1 % z == 0, l2_zero = l2 % z == 0;
        const bool interior = !l1_zero && !l2_zero;
        const bool a_even = a % 2 == 0;
        const i64 nfz = as_signed(rank.nu_fz);
        take(t.r == t.s || l2_zero, "+-2 mod 5; r=s or z|l2", [&] { return binom; });
        take(l1_zero && !l2_zero, "+-2 mod 5; z|l1, z!|l2", [&] { return sa + nfz + nu_diff() + binom; });
        take(t.r > t.s && interior && a_even, "+-2 mod 5; r>s, a even", [&] { return sa / 2 + binom; });
        take(t.r < t.s && interior && a_even, "+-2 mod 5; r<s, a even",
             [&] { return sa / 2 + nfz + nu_diff() + binom; });
        take(t.r > t.s && interior && !a_even, "+-2 mod 5; r>s, a odd",
             [&] { return (sa + 1) / 2 + nu_diff() + binom; });
        take(t.r < t.s && interior && !a_even, "+-2 mod 5; r<s, a odd",
             [&] { return (sa - 1) / 2 + nfz + binom; });
    }
    check_integrity(matched == 1, "ratio theorem: exactly one case matches");
    t.branch_label = std::string(label);
    e.valuation = Valuation::from_signed(value, Method::formula, "ratio theorem");
    return e;
}

// ---------------------------------------------------------------------------

std::vector<std::string> nu2_delta_cases() {
    return {"even:0", "even:1", "even:2", "even:3", "even:4", "even:5",
            "odd:1",  "odd:3",  "odd:5",  "odd:n0", "odd:n4", "odd:n2"};
}

Nu2DeltaTable flip_nu2_delta_case(std::string_view name) {
    Nu2DeltaTable t = kNu2DeltaTable;
    if (name.starts_with("even:") && name.size() == 6 && name[5] >= '0' && name[5] <= '5') {
        t.even_a[name[5] - '0'] ^= 1;
    } else if (name == "odd:1") {
        t.odd_a_odd_n[0] ^= 1;
    } else if (name == "odd:3") {
        t.odd_a_odd_n[1] ^= 1;
    } else if (name == "odd:5") {
        t.odd_a_odd_n[2] ^= 1;
    } else if (name == "odd:n0") {
        t.odd_a_n0 ^= 1;
    } else if (name == "odd:n4") {
        t.odd_a_n4_offset ^= 1;
    } else if (name == "odd:n2") {
        t.odd_a_n2_shift ^= 1;
    } else {
        throw domain_error("unknown delta case '" + std::string(name) + "'");
    }
    return t;
}

Evaluation nu2_central(u64 a, u64 n, const Nu2DeltaTable& table) {
    const u64 m = central_index(2, a, n);
    Evaluation e;
    BranchTrace& t = e.trace;
    t.theorem = Theorem::C2adic;
    t.z = 3;
    t.nu_fz = 1;
    t.r = m % 6;
    t.s = n % 6;
    t.b = nu(2, n);
    t.epsilon = iverson(n % 3 != 0);
    // A = floor((2^a - 1) n / (3 * 2^b)); 2^b divides n exactly.
    t.A = ((m - n) >> t.b) / 3;

    const u64 n6 = n % 6;
    const bool default_table = table == kNu2DeltaTable;
    i64 coefficient = 0;  // multiplier of epsilon
    if (a % 2 == 0) {
        t.delta = table.even_a[n6];
        coefficient = as_signed(a / 2);
        t.branch_label = "a even; n mod 6 = " + std::to_string(n6);
        if (default_table) check_integrity(t.delta == iverson(n6 == 3 || n6 == 5), "2-adic delta, a even");
    } else {
        switch (n6) {
            case 1:
            case 3:
            case 5: t.delta = table.odd_a_odd_n[n6 / 2]; break;
            case 0: t.delta = table.odd_a_n0; break;
            case 4: t.delta = as_signed(ceil_half(t.b)) + table.odd_a_n4_offset; break;
            case 2: t.delta = ceil_div(as_signed(t.b) + table.odd_a_n2_shift, 2); break;
        }
        coefficient = as_signed((a - 1) / 2);
        t.branch_label = "a odd; n mod 6 = " + std::to_string(n6);
        if (default_table) {
            // One-line Iverson form of the same delta.
            const i64 one_liner =
                ((as_signed(n6) - 1) / 2) * iverson(n % 2 == 1) +
                ceil_div(as_signed(t.b) + 3 - as_signed(n % 3), 2) * iverson(n6 == 2 || n6 == 4);
            check_integrity(t.delta == one_liner, "2-adic delta, a odd: case list vs Iverson form");
        }
    }

    const i64 digit_form = t.delta + as_signed(digit_sum(2, t.A)) - coefficient * t.epsilon;
    const i64 legendre_form =
        t.delta + as_signed(t.A) - coefficient * t.epsilon - as_signed(legendre_sum(2, t.A));
    check_integrity(digit_form == legendre_form, "2-adic central: digit-sum vs Legendre form");
    e.valuation = Valuation::from_signed(digit_form, Method::formula, "nu2_central");
    return e;
}

Valuation nu5_central(u64 a, u64 n) {
    const u64 m = central_index(5, a, n);
    const u64 ds = digit_sum(5, m - n);
    check_integrity(ds % 4 == 0, "5-adic central: 4 divides s_5((5^a - 1) n)");
    const u64 value = ds / 4;
    check_integrity(value >= 1, "5-adic central: 5 divides C(5^a n, n)_F");
    check_integrity(value == nu_binomial(5, m, n), "5-adic central: digit-sum vs binomial valuation");
    return Valuation{value, Method::formula};
}

Evaluation nup_central(u64 p, u64 a, u64 n) {
    require_prime(p);
    if (p == 2 || p == 5) throw domain_error("nup_central: p must not be 2 or 5");
    const u64 m = central_index(p, a, n);
    const RankRecord rank = rank_of_apparition(p);
    const u64 z = rank.z;

    Evaluation e;
    BranchTrace& t = e.trace;
    t.theorem = Theorem::Cp;
    t.z = z;
    t.nu_fz = rank.nu_fz;
    t.r = m % z;
    t.s = n % z;
    t.b = nu(p, n);
    const u64 l = n / checked_pow(p, t.b);
    // A = floor(n (p^a - 1) / (p^b z)) = floor(l (p^a - 1) / z)
    t.A = (m - n) / (n / l) / z;
    t.epsilon = iverson(t.s != 0);

    const i64 pm1 = as_signed(p - 1);
    const i64 sp = as_signed(digit_sum(p, t.A));
    const i64 nu_a_fact = as_signed(legendre_sum(p, t.A));
    const i64 sa = as_signed(a);
    const i64 s_nonzero = t.epsilon;

    i64 value = 0;
    if (congruence_class_mod5(p) == Mod5Class::plus_minus_1) {
        const Fraction frac_part = Fraction(as_signed(l % z), as_signed(z));  // {l / z}
        const Fraction digit = Fraction(sp, pm1) - Fraction(sa) * frac_part;
        const Fraction legendre = Fraction(as_signed(t.A), pm1) - Fraction(sa) * frac_part - Fraction(nu_a_fact);
        value = digit.as_integer("p = +-1 mod 5 central, digit form");
        check_integrity(value == legendre.as_integer("p = +-1 mod 5 central, Legendre form"),
                        "p = +-1 mod 5 central: digit-sum vs Legendre form");
        t.branch_label = t.s == 0 ? "+-1 mod 5; s = 0" : "+-1 mod 5; s != 0";
    } else if (a % 2 == 0) {
        const Fraction digit = Fraction(sp, pm1) - Fraction((sa / 2) * s_nonzero);
        const Fraction legendre = Fraction(as_signed(t.A), pm1) - Fraction((sa / 2) * s_nonzero + nu_a_fact);
        value = digit.as_integer("p = +-2 mod 5 central, a even, digit form");
        check_integrity(value == legendre.as_integer("p = +-2 mod 5 central, a even, Legendre form"),
                        "p = +-2 mod 5 central, a even: digit-sum vs Legendre form");
        t.branch_label = t.s == 0 ? "+-2 mod 5; a even; s = 0" : "+-2 mod 5; a even; s != 0";
    } else {
        const i64 b = as_signed(t.b);
        if (t.r == t.s) {
            t.delta = 0;
            t.branch_label = "+-2 mod 5; a odd; r = s";
        } else if (t.r < t.s) {
            t.delta = b / 2 + as_signed(rank.nu_fz);
            t.branch_label = "+-2 mod 5; a odd; r < s";
        } else {
            t.delta = ceil_div(b, 2);
            t.branch_label = "+-2 mod 5; a odd; r > s";
        }
        const i64 one_liner = (b / 2 + iverson(b % 2 == 1) * iverson(t.r > t.s) +
                               iverson(t.r < t.s) * as_signed(rank.nu_fz)) *
                              iverson(t.r != t.s);
        check_integrity(t.delta == one_liner, "p = +-2 mod 5 central, a odd: delta case list vs Iverson form");
        const i64 head = floor_div(as_signed(t.A), pm1) - ((sa - 1) / 2) * s_nonzero + t.delta;
        value = head - nu_a_fact;
        check_integrity(value == head - as_signed(nu_factorial(p, t.A).value),
                        "p = +-2 mod 5 central, a odd: Legendre sum vs digit-sum form");
    }
    e.valuation = Valuation::from_signed(value, Method::formula, "nup_central");
    return e;
}

Evaluation central_valuation(u64 p, u64 a, u64 n, const Nu2DeltaTable& table) {
    require_prime(p);
    if (p == 2) return nu2_central(a, n, table);
    if (p == 5) {
        Evaluation e;
        e.valuation = nu5_central(a, n);
        const u64 m = central_index(5, a, n);
        BranchTrace& t = e.trace;
        t.theorem = Theorem::C5adic;
        t.branch_label = "s_5((5^a - 1) n) / 4";
        t.z = 5;
        t.nu_fz = 1;
        t.r = m % 5;
        t.s = n % 5;
        t.b = nu(5, n);
        return e;
    }
    return nup_central(p, a, n);
}

std::vector<std::string> theorem_coverage_keys(Theorem t) {
    auto keys = [t](std::initializer_list<std::string_view> labels) {
        std::vector<std::string> out;
        for (auto l : labels) out.push_back(std::string(to_string(t)) + ": " + std::string(l));
        return out;
    };
    switch (t) {
        case Theorem::T2adic_general:
            return keys({"k = 0 or k = m", "r>=s", "r>=s exceptional", "r<s", "r<s exceptional"});
        case Theorem::T5adic: return keys({"k = 0 or k = m", "binomial reduction"});
        case Theorem::Tp_general_mk: return keys({"k = 0 or k = m", "r>=s", "r<s"});
        case Theorem::Tratio:
            return keys({"same parity; l1=l2 or l2=0 (mod 3)", "same parity; l1=0, l2!=0 (mod 3)",
                         "same parity; l1=1, l2=2 (mod 3)", "same parity; l1=2, l2=1 (mod 3)",
                         "opposite parity; l1=-l2 or l2=0 (mod 3)", "opposite parity; l1=0, l2!=0 (mod 3)",
                         "opposite parity; l1=l2=1 (mod 3)", "opposite parity; l1=l2=2 (mod 3)",
                         "+-1 mod 5; r>=s", "+-1 mod 5; r<s", "+-2 mod 5; r=s or z|l2",
                         "+-2 mod 5; z|l1, z!|l2", "+-2 mod 5; r>s, a even", "+-2 mod 5; r<s, a even",
                         "+-2 mod 5; r>s, a odd", "+-2 mod 5; r<s, a odd"});
        case Theorem::C2adic: {
            std::vector<std::string> out;
            for (std::string_view parity : {"a even", "a odd"})
                for (int r = 0; r < 6; ++r)
                    out.push_back("C2adic: " + std::string(parity) + "; n mod 6 = " + std::to_string(r));
            return out;
        }
        case Theorem::C5adic: return keys({"s_5((5^a - 1) n) / 4"});
        case Theorem::Cp:
            return keys({"+-1 mod 5; s = 0", "+-1 mod 5; s != 0", "+-2 mod 5; a even; s = 0",
                         "+-2 mod 5; a even; s != 0", "+-2 mod 5; a odd; r = s", "+-2 mod 5; a odd; r < s",
                         "+-2 mod 5; a odd; r > s"});
    }
    return {};
}

std::vector<std::string> central_coverage_keys(u64 p, u64 a) {
    require_prime(p);
    std::vector<std::string> out;
    auto add = [&](Theorem t, std::initializer_list<std::string_view> labels) {
        for (auto l : labels) out.push_back(std::string(to_string(t)) + ": " + std::string(l));
    };
    const bool even = a % 2 == 0;
    if (p == 2) {
        for (int r = 0; r < 6; ++r)
            out.push_back(std::string("C2adic: ") + (even ? "a even" : "a odd") + "; n mod 6 = " +
                          std::to_string(r));
        // 2^a = 4 (mod 6) for even a and 2 (mod 6) for odd a restricts (r, s).
        if (even)
            add(Theorem::T2adic_general, {"r>=s", "r<s exceptional"});
        else
            add(Theorem::T2adic_general, {"r>=s", "r>=s exceptional", "r<s", "r<s exceptional"});
        return out;
    }
    if (p == 5) {
        add(Theorem::C5adic, {"s_5((5^a - 1) n) / 4"});
        add(Theorem::T5adic, {"binomial reduction"});
        return out;
    }
    if (congruence_class_mod5(p) == Mod5Class::plus_minus_1) {
        add(Theorem::Cp, {"+-1 mod 5; s = 0", "+-1 mod 5; s != 0"});
        add(Theorem::Tp_general_mk, {"r>=s"});
    } else if (even) {
        add(Theorem::Cp, {"+-2 mod 5; a even; s = 0", "+-2 mod 5; a even; s != 0"});
        add(Theorem::Tp_general_mk, {"r>=s"});
    } else {
        add(Theorem::Cp, {"+-2 mod 5; a odd; r = s", "+-2 mod 5; a odd; r < s", "+-2 mod 5; a odd; r > s"});
        add(Theorem::Tp_general_mk, {"r>=s", "r<s"});
    }
    return out;
}

// ---------------------------------------------------------------------------

bool is_odd_2n(u64 n) { return nu2_central(1, n).valuation.value == 0; }
bool is_odd_4n(u64 n) { return nu2_central(2, n).valuation.value == 0; }
bool is_odd_8n(u64 n) { return nu2_central(3, n).valuation.value == 0; }

bool is_power_of_two(u64 n) { return n != 0 && (n & (n - 1)) == 0; }

bool is_one_plus_three_pow2_over_7(u64 n) {
    if (n == 0) return false;
    const u128 x = static_cast<u128>(n) * 7 - 1;
    if (x % 3 != 0) return false;
    const auto q = static_cast<u64>(x / 3);
    if (!is_power_of_two(q)) return false;
    const int k = __builtin_ctzll(q);
    return k % 3 == 1;
}

std::string_view to_string(DivisibilityReason r) {
    switch (r) {
        case DivisibilityReason::p_equals_5: return "p_equals_5";
        case DivisibilityReason::z_divides_n: return "z_divides_n";
        case DivisibilityReason::r_less_s: return "r_less_s";
        case DivisibilityReason::r_ne_s: return "r_ne_s";
        case DivisibilityReason::digit_sum_threshold: return "digit_sum_threshold";
        case DivisibilityReason::formula_positive: return "formula_positive";
        case DivisibilityReason::formula_zero: return "formula_zero";
    }
    return "unknown";
}

Divisibility divides_p_central(u64 p, u64 a, u64 n) {
    require_prime(p);
    const u64 m = central_index(p, a, n);
    using R = DivisibilityReason;
    auto by_threshold = [](bool met) { return Divisibility{met, met ? R::digit_sum_threshold : R::formula_zero}; };
    auto by_formula = [&] {
        const bool positive = central_valuation(p, a, n).valuation.value > 0;
        return Divisibility{positive, positive ? R::formula_positive : R::formula_zero};
    };

    if (p == 5) return {true, R::p_equals_5};
    const RankRecord rank = rank_of_apparition(p);
    const u64 z = rank.z;
    if (n % z == 0) return {true, R::z_divides_n};
    if (p == 2) return by_formula();

    const u64 b = nu(p, n);
    const u64 l = n / checked_pow(p, b);
    if (congruence_class_mod5(p) == Mod5Class::plus_minus_1) {
        if (a != 1) return by_formula();
        // A = n (p - 1) / (p^b z) is an integer since z | p - 1.
        const u64 num = checked_mul(l, p - 1);
        check_integrity(num % z == 0, "+-1 threshold: z divides l (p - 1)");
        return by_threshold(digit_sum(p, num / z) >= p - 1);
    }

    const u64 A = (m - n) / (n / l) / z;
    const u64 sp = digit_sum(p, A);
    const u64 r = m % z, s = n % z;
    if (a % 2 == 0) return by_threshold(2 * sp > a * (p - 1));
    // a odd: s_p(A) >= (a + 1)(p - 1) / 2
    const bool threshold = 2 * sp >= (a + 1) * (p - 1);
    if (b == 0) {
        if (r < s) return {true, R::r_less_s};
        return by_threshold(threshold);
    }
    if (r != s) return {true, R::r_ne_s};
    return by_threshold(threshold);
}

}  // namespace fibval
