#pragma once

// Subcommand implementations behind the fibval CLI. Each cmd_* writes its
// rendered output to `out`, diagnostics to `err`, and returns the process
// exit status.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fibval/formulas.hpp"
#include "fibval/oracle.hpp"

namespace fibval::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitMismatch = 1,
    kExitUsage = 2,
    kExitDisagreement = 3,
    kExitCoverageGap = 4,
};

// ----- eval ----------------------------------------------------------------

enum class EvalMethod { formula, oracle, both };

struct EvalOptions {
    std::uint64_t p = 0;
    std::optional<std::uint64_t> a, n;  // central form
    std::optional<std::uint64_t> m, k;  // general form
    EvalMethod method = EvalMethod::formula;
    std::optional<OracleTier> tier;     // default: exact when m fits the cap, else modular
    bool explain = false;
};

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);

// ----- scan ----------------------------------------------------------------

enum class ScanPredicate { divisible, not_divisible, odd_fibonomial };

struct ScanOptions {
    std::uint64_t p = 0;
    std::uint64_t a = 0;
    std::uint64_t n_max = 0;
    ScanPredicate predicate = ScanPredicate::divisible;
    bool json = false;
};

/// All 1 <= n <= n_max satisfying the predicate, ascending.
std::vector<std::uint64_t> scan(const ScanOptions& opts);

int cmd_scan(const ScanOptions& opts, std::ostream& out, std::ostream& err);

// ----- verify --------------------------------------------------------------

enum class VerifyTier { exact, modular, both };

struct VerifyOptions {
    std::vector<std::uint64_t> p_set;
    std::uint64_t a_max = 1;
    std::uint64_t n_max = 1;
    std::uint64_t index_cap = kModularCap;
    VerifyTier tier = VerifyTier::modular;
    std::optional<std::string> delta_mutation;  // a name from nu2_delta_cases()
};

struct Mismatch {
    std::uint64_t p = 0, a = 0, n = 0;
    std::int64_t formula = 0;   // -1 when the formula raised an integrity error
    std::int64_t reference = 0;
    std::string branch;
    std::string check;  // central_vs_oracle_modular, general_vs_central, ...
};

struct VerifyReport {
    VerifyOptions grid;
    std::uint64_t effective_cap = 0;
    std::uint64_t cells_checked = 0;
    std::uint64_t comparisons = 0;
    std::vector<Mismatch> mismatches;
    std::map<std::string, std::uint64_t> branch_coverage;
    std::vector<std::string> declared;
    std::chrono::duration<double> elapsed{};

    std::vector<std::string> uncovered() const;
    int exit_code() const;
};

VerifyReport run_verify(const VerifyOptions& opts);

nlohmann::ordered_json to_json(const VerifyReport& report);

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

// ----- table ---------------------------------------------------------------

struct TableOptions {
    std::uint64_t p = 0;
    std::uint64_t a = 0;
    std::uint64_t n_max = 0;
    std::string format = "csv";
};

int cmd_table(const TableOptions& opts, std::ostream& out, std::ostream& err);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace fibval::cli
