#include "fibval/commands.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace fibval::cli {

namespace {

using u64 = std::uint64_t;

void print_trace(const BranchTrace& t, std::ostream& out) {
    out << "theorem: " << to_string(t.theorem) << "\n";
    out << "branch: " << t.display_label() << "\n";
    out << "trace: r=" << t.r << " s=" << t.s << " A=" << t.A << " delta=" << t.delta
        << " epsilon=" << t.epsilon << " z=" << t.z << " nu_fz=" << t.nu_fz << " b=" << t.b;
    if (t.a2) out << " A2=" << *t.a2;
    if (t.m_reduced) out << " m'=" << *t.m_reduced;
    if (t.k_reduced) out << " k'=" << *t.k_reduced;
    out << "\n";
}

OracleTier default_tier(u64 m) { return m <= exact_cap() ? OracleTier::exact : OracleTier::modular; }

}  // namespace

// ---------------------------------------------------------------------------

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        require_prime(opts.p);
        const bool central = opts.a || opts.n;
        const bool general = opts.m || opts.k;
        if (central == general || (central && !(opts.a && opts.n)) || (general && !(opts.m && opts.k))) {
            err << "eval: give either --a and --n, or --m and --k\n";
            return kExitUsage;
        }

        u64 m = 0, k = 0;
        Evaluation formula;
        if (central) {
            m = central_index(opts.p, *opts.a, *opts.n);
            k = *opts.n;
            out << "query: p=" << opts.p << " a=" << *opts.a << " n=" << *opts.n << " (m=" << m << ", k=" << k
                << ")\n";
        } else {
            m = *opts.m;
            k = *opts.k;
            if (m == 0 || k > m) {
                err << "eval: need 1 <= m and 0 <= k <= m\n";
                return kExitUsage;
            }
            out << "query: p=" << opts.p << " m=" << m << " k=" << k << "\n";
        }

        std::optional<Valuation> from_formula, from_oracle;
        if (opts.method != EvalMethod::oracle) {
            formula = central ? central_valuation(opts.p, *opts.a, *opts.n) : nu_fibonomial_formula(opts.p, m, k);
            from_formula = formula.valuation;
            out << "formula: nu=" << formula.valuation.value << "\n";
            if (opts.explain) print_trace(formula.trace, out);
        }
        if (opts.method != EvalMethod::formula) {
            const OracleTier tier = opts.tier.value_or(default_tier(m));
            from_oracle = nu_fibonomial_oracle(opts.p, m, k, tier);
            out << "oracle: nu=" << from_oracle->value << " (" << to_string(from_oracle->method) << ")\n";
        }
        if (from_formula && from_oracle) {
            const bool agree = from_formula->value == from_oracle->value;
            out << "agreement: " << (agree ? "yes" : "no") << "\n";
            if (!agree) return kExitDisagreement;
        }
        return kExitOk;
    } catch (const domain_error& e) {
        err << "eval: " << e.what() << "\n";
        return kExitUsage;
    }
}

// ---------------------------------------------------------------------------

std::vector<u64> scan(const ScanOptions& opts) {
    require_prime(opts.p);
    if (opts.a == 0) throw domain_error("scan: a must be >= 1");
    if (opts.n_max == 0) return {};
    central_index(opts.p, opts.a, opts.n_max);  // cap check

    std::vector<u64> hits;
    for (u64 n = 1; n <= opts.n_max; ++n) {
        bool keep = false;
        switch (opts.predicate) {
            case ScanPredicate::divisible: keep = divides_p_central(opts.p, opts.a, n).divisible; break;
            case ScanPredicate::not_divisible: keep = !divides_p_central(opts.p, opts.a, n).divisible; break;
            case ScanPredicate::odd_fibonomial:
                if (opts.p == 2)
                    keep = nu2_central(opts.a, n).valuation.value == 0;
                else
                    keep = nu_fibonomial_formula(2, central_index(opts.p, opts.a, n), n).valuation.value == 0;
                break;
        }
        if (keep) hits.push_back(n);
    }
    return hits;
}

int cmd_scan(const ScanOptions& opts, std::ostream& out, std::ostream& err) {
    std::vector<u64> hits;
    try {
        hits = scan(opts);
    } catch (const domain_error& e) {
        err << "scan: " << e.what() << "\n";
        return kExitUsage;
    }
    if (opts.json) {
        out << nlohmann::json(hits).dump() << "\n";
    } else {
        for (u64 n : hits) out << n << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

std::vector<std::string> VerifyReport::uncovered() const {
    std::vector<std::string> out;
    for (const auto& key : declared) {
        auto it = branch_coverage.find(key);
        if (it == branch_coverage.end() || it->second == 0) out.push_back(key);
    }
    return out;
}

int VerifyReport::exit_code() const {
    if (!mismatches.empty()) return kExitMismatch;
    if (!uncovered().empty()) return kExitCoverageGap;
    return kExitOk;
}

VerifyReport run_verify(const VerifyOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    if (opts.p_set.empty()) throw domain_error("verify: empty prime set");
    for (u64 p : opts.p_set) require_prime(p, "p-set entry");
    if (opts.a_max == 0 || opts.n_max == 0) throw domain_error("verify: a-max and n-max must be >= 1");
    if (opts.index_cap == 0) throw domain_error("verify: index cap must be >= 1");
    const bool use_modular = opts.tier != VerifyTier::exact;
    const bool use_exact = opts.tier != VerifyTier::modular;
    if (use_modular && opts.index_cap > kModularCap)
        throw domain_error("verify: index cap exceeds the modular oracle cap " + std::to_string(kModularCap));

    const Nu2DeltaTable table = opts.delta_mutation ? flip_nu2_delta_case(*opts.delta_mutation) : kNu2DeltaTable;

    VerifyReport report;
    report.grid = opts;
    std::sort(report.grid.p_set.begin(), report.grid.p_set.end());
    report.grid.p_set.erase(std::unique(report.grid.p_set.begin(), report.grid.p_set.end()),
                            report.grid.p_set.end());
    const u64 exact_limit = exact_cap();
    report.effective_cap = opts.tier == VerifyTier::exact ? std::min(opts.index_cap, exact_limit) : opts.index_cap;
    const u64 cap = report.effective_cap;

    std::set<std::string> declared;
    ExactOracle exact(exact_limit);

    auto mismatch = [&](u64 p, u64 a, u64 n, std::int64_t f, std::int64_t ref, std::string branch,
                        std::string check) {
        report.mismatches.push_back(Mismatch{p, a, n, f, ref, std::move(branch), std::move(check)});
    };

    for (u64 p : report.grid.p_set) {
        // Largest index this prime will touch.
        u64 max_index = 0;
        for (u64 a = 1; a <= opts.a_max; ++a) {
            u64 pa = 0;
            try {
                pa = checked_pow(p, a);
            } catch (const domain_error&) {
                break;
            }
            if (pa > cap) break;
            max_index = std::max(max_index, std::min(cap / pa, opts.n_max) * pa);
        }
        if (max_index == 0) continue;
        std::optional<ModularOracle> modular;
        if (use_modular) modular.emplace(p, max_index);

        for (u64 a = 1; a <= opts.a_max; ++a) {
            u64 pa = 0;
            try {
                pa = checked_pow(p, a);
            } catch (const domain_error&) {
                break;
            }
            if (pa > cap) break;
            const u64 n_top = std::min(cap / pa, opts.n_max);
            if (n_top == 0) continue;
            for (const auto& key : central_coverage_keys(p, a)) declared.insert(key);

            for (u64 n = 1; n <= n_top; ++n) {
                ++report.cells_checked;
                const u64 m = pa * n;
                Evaluation central;
                try {
                    central = central_valuation(p, a, n, table);
                } catch (const integrity_error& e) {
                    mismatch(p, a, n, -1, -1, e.what(), "integrity");
                    continue;
                }
                const auto value = static_cast<std::int64_t>(central.valuation.value);
                const std::string branch = central.trace.display_label();
                ++report.branch_coverage[central.trace.coverage_key()];

                if (modular) {
                    ++report.comparisons;
                    const auto ref = static_cast<std::int64_t>(modular->nu_fibonomial(m, n).value);
                    if (ref != value) mismatch(p, a, n, value, ref, branch, "central_vs_oracle_modular");
                }
                if (use_exact && m <= exact_limit) {
                    ++report.comparisons;
                    const auto ref = static_cast<std::int64_t>(exact.nu_fibonomial(p, m, n).value);
                    if (ref != value) mismatch(p, a, n, value, ref, branch, "central_vs_oracle_exact");
                }

                try {
                    const Evaluation general = nu_fibonomial_formula(p, m, n);
                    ++report.branch_coverage[general.trace.coverage_key()];
                    ++report.comparisons;
                    const auto g = static_cast<std::int64_t>(general.valuation.value);
                    if (g != value) mismatch(p, a, n, value, g, general.trace.display_label(), "general_vs_central");

                    const u64 b = nu(p, n);
                    if (p != 5 && b >= 1) {
                        const u64 l = n / checked_pow(p, b);
                        const Evaluation ratio = nu_ratio_prime_powers(p, l, a + b, l, b);
                        ++report.branch_coverage[ratio.trace.coverage_key()];
                        ++report.comparisons;
                        const auto rv = static_cast<std::int64_t>(ratio.valuation.value);
                        if (rv != value) mismatch(p, a, n, value, rv, ratio.trace.display_label(), "ratio_vs_central");
                    }
                } catch (const integrity_error& e) {
                    mismatch(p, a, n, value, -1, e.what(), "integrity");
                }
            }
        }
    }

    report.declared.assign(declared.begin(), declared.end());
    for (const auto& key : report.declared) report.branch_coverage.try_emplace(key, 0);
    std::stable_sort(report.mismatches.begin(), report.mismatches.end(), [](const Mismatch& x, const Mismatch& y) {
        return std::tie(x.n, x.a, x.p) < std::tie(y.n, y.a, y.p);
    });
    report.elapsed = std::chrono::steady_clock::now() - start;
    return report;
}

nlohmann::ordered_json to_json(const VerifyReport& report) {
    using nlohmann::ordered_json;
    const auto tier_name = [](VerifyTier t) {
        switch (t) {
            case VerifyTier::exact: return "exact";
            case VerifyTier::modular: return "modular";
            case VerifyTier::both: return "both";
        }
        return "unknown";
    };
    ordered_json grid;
    grid["p_set"] = report.grid.p_set;
    grid["a_max"] = report.grid.a_max;
    grid["n_max"] = report.grid.n_max;
    grid["index_cap"] = report.effective_cap;
    grid["tier"] = tier_name(report.grid.tier);
    grid["delta_mutation"] = report.grid.delta_mutation ? ordered_json(*report.grid.delta_mutation) : ordered_json();

    ordered_json mismatches = ordered_json::array();
    for (const auto& m : report.mismatches) {
        ordered_json row;
        row["p"] = m.p;
        row["a"] = m.a;
        row["n"] = m.n;
        row["formula"] = m.formula;
        row["oracle"] = m.reference;
        row["branch"] = m.branch;
        row["check"] = m.check;
        mismatches.push_back(std::move(row));
    }

    ordered_json coverage = ordered_json::object();
    for (const auto& [key, count] : report.branch_coverage) coverage[key] = count;

    ordered_json out;
    out["grid"] = std::move(grid);
    out["cells_checked"] = report.cells_checked;
    out["comparisons"] = report.comparisons;
    out["mismatches"] = std::move(mismatches);
    out["branch_coverage"] = std::move(coverage);
    out["uncovered"] = report.uncovered();
    out["exit_status"] = report.exit_code();
    out["elapsed_seconds"] = report.elapsed.count();
    return out;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
    VerifyReport report;
    try {
        report = run_verify(opts);
    } catch (const domain_error& e) {
        err << "verify: " << e.what() << "\n";
        return kExitUsage;
    }
    out << to_json(report).dump(2) << "\n";
    const int code = report.exit_code();
    if (code == kExitMismatch) err << "verify: " << report.mismatches.size() << " mismatches\n";
    if (code == kExitCoverageGap) err << "verify: " << report.uncovered().size() << " branches never exercised\n";
    return code;
}

// ---------------------------------------------------------------------------

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

int cmd_table(const TableOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.format != "csv" && opts.format != "json") {
        err << "table: unknown format '" << opts.format << "' (expected csv or json)\n";
        return kExitUsage;
    }
    struct Row {
        u64 n;
        u64 nu;
        std::string branch;
    };
    std::vector<Row> rows;
    try {
        require_prime(opts.p);
        if (opts.a == 0) throw domain_error("a must be >= 1");
        if (opts.n_max > 0) central_index(opts.p, opts.a, opts.n_max);
        for (u64 n = 1; n <= opts.n_max; ++n) {
            Evaluation e = central_valuation(opts.p, opts.a, n);
            rows.push_back(Row{n, e.valuation.value, e.trace.display_label()});
        }
    } catch (const domain_error& e) {
        err << "table: " << e.what() << "\n";
        return kExitUsage;
    }

    if (opts.format == "csv") {
        out << "p,a,n,nu,branch\n";
        for (const auto& r : rows)
            out << opts.p << ',' << opts.a << ',' << r.n << ',' << r.nu << ',' << csv_field(r.branch) << '\n';
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json o;
            o["p"] = opts.p;
            o["a"] = opts.a;
            o["n"] = r.n;
            o["nu"] = r.nu;
            o["branch"] = r.branch;
            arr.push_back(std::move(o));
        }
        out << arr.dump(2) << "\n";
    }
    return kExitOk;
}

}  // namespace fibval::cli
