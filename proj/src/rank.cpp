#include "fibval/rank.hpp"

#include <limits>
#include <mutex>
#include <string>
#include <unordered_map>

#include "fibval/arith.hpp"

namespace fibval {

namespace {

constexpr std::uint64_t kMaxExponent = 64;

RankRecord compute_rank(std::uint64_t p) {
    // z(p) <= p + 1 for every prime; scan consecutive pairs mod p.
    std::uint64_t prev = 0, cur = 1, z = 1;
    while (cur != 0) {
        std::uint64_t next = prev + cur;
        if (next >= p) next -= p;
        prev = cur;
        cur = next;
        ++z;
        check_integrity(z <= p + 1, "rank of apparition exceeds p + 1");
    }

    // Raise the modulus p^e until F_z stops vanishing.
    std::uint64_t e = 1;
    std::uint64_t modulus = p;
    for (;;) {
        if (modulus > std::numeric_limits<std::uint64_t>::max() / p)
            throw domain_error("rank_of_apparition: p^e exceeds 64 bits for p = " + std::to_string(p));
        modulus *= p;
        if (fib_mod(z, modulus) != 0) break;
        ++e;
        if (e > kMaxExponent) fail_integrity("nu_p(F_z(p)) exceeds exponent cap");
    }
    return RankRecord{p, z, e};
}

struct RankCache {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, RankRecord> records;
};

RankCache& cache() {
    static RankCache instance;
    return instance;
}

}  // namespace

std::string_view to_string(Mod5Class c) {
    switch (c) {
        case Mod5Class::plus_minus_1: return "+-1 mod 5";
        case Mod5Class::plus_minus_2: return "+-2 mod 5";
        case Mod5Class::is_5: return "p = 5";
    }
    return "unknown";
}

Mod5Class congruence_class_mod5(std::uint64_t p) {
    require_prime(p);
    switch (p % 5) {
        case 0: return Mod5Class::is_5;
        case 1:
        case 4: return Mod5Class::plus_minus_1;
        default: return Mod5Class::plus_minus_2;
    }
}

RankRecord rank_of_apparition(std::uint64_t p) {
    require_prime(p);
    auto& c = cache();
    {
        std::lock_guard lock(c.mutex);
        if (auto it = c.records.find(p); it != c.records.end()) return it->second;
    }
    RankRecord rec = compute_rank(p);
    std::lock_guard lock(c.mutex);
    c.records.emplace(p, rec);
    return rec;
}

}  // namespace fibval
