#pragma once

#include <cstdint>
#include <string_view>

namespace fibval {

/// Rank of apparition z(p) of a prime in the Fibonacci sequence, and the
/// exponent of p in F_{z(p)}.
struct RankRecord {
    std::uint64_t p = 0;
    std::uint64_t z = 0;
    std::uint64_t nu_fz = 0;

    friend bool operator==(const RankRecord&, const RankRecord&) = default;
};

enum class Mod5Class { plus_minus_1, plus_minus_2, is_5 };

std::string_view to_string(Mod5Class c);

/// Classifies a prime by its residue mod 5. p = 2 and p = 3 land in plus_minus_2.
Mod5Class congruence_class_mod5(std::uint64_t p);

/// z(p) and nu_p(F_{z(p)}), computed once per prime and cached.
/// Thread safe. Throws domain_error for composite p.
RankRecord rank_of_apparition(std::uint64_t p);

}  // namespace fibval
