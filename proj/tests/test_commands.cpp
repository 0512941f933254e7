#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "fibval/commands.hpp"

using namespace fibval;
using namespace fibval::cli;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("eval central form, both methods") {
    EvalOptions o;
    o.p = 2;
    o.a = 1;
    o.n = 2;
    o.method = EvalMethod::both;
    o.explain = true;
    std::ostringstream out, err;
    CHECK(cmd_eval(o, out, err) == kExitOk);
    const std::string s = out.str();
    CHECK(s.find("formula: nu=1") != std::string::npos);
    CHECK(s.find("oracle: nu=1 (oracle_exact)") != std::string::npos);
    CHECK(s.find("agreement: yes") != std::string::npos);
    CHECK(s.find("theorem: C2adic") != std::string::npos);
}

TEST_CASE("eval general form and usage errors") {
    EvalOptions o;
    o.p = 2;
    o.m = 6;
    o.k = 2;
    o.method = EvalMethod::both;
    std::ostringstream out, err;
    CHECK(cmd_eval(o, out, err) == kExitOk);
    CHECK(out.str().find("formula: nu=3") != std::string::npos);

    EvalOptions mixed = o;
    mixed.a = 1;
    CHECK(cmd_eval(mixed, out, err) == kExitUsage);

    EvalOptions composite = o;
    composite.p = 9;
    CHECK(cmd_eval(composite, out, err) == kExitUsage);

    EvalOptions bad_k = o;
    bad_k.k = 7;
    CHECK(cmd_eval(bad_k, out, err) == kExitUsage);

    EvalOptions modular = o;
    modular.tier = OracleTier::modular;
    std::ostringstream out2;
    CHECK(cmd_eval(modular, out2, err) == kExitOk);
    CHECK(out2.str().find("(oracle_modular)") != std::string::npos);
}

TEST_CASE("scan lists") {
    ScanOptions o;
    o.p = 2;
    o.a = 2;
    o.n_max = 20;
    o.predicate = ScanPredicate::odd_fibonomial;
    CHECK(scan(o) == std::vector<std::uint64_t>{1, 2, 4, 8, 16});
    o.a = 3;
    o.n_max = 60;
    CHECK(scan(o) == std::vector<std::uint64_t>{1, 7, 55});

    ScanOptions d;
    d.p = 3;
    d.a = 1;
    d.n_max = 8;
    CHECK(scan(d) == std::vector<std::uint64_t>{3, 4, 5, 7, 8});
    d.predicate = ScanPredicate::not_divisible;
    CHECK(scan(d) == std::vector<std::uint64_t>{1, 2, 6});

    d.predicate = ScanPredicate::divisible;
    d.json = true;
    std::ostringstream out, err;
    CHECK(cmd_scan(d, out, err) == kExitOk);
    CHECK(out.str() == "[3,4,5,7,8]\n");

    ScanOptions capped;
    capped.p = 2;
    capped.a = 62;
    capped.n_max = 4;
    CHECK(cmd_scan(capped, out, err) == kExitUsage);
}

TEST_CASE("table CSV output") {
    TableOptions o;
    o.p = 5;
    o.a = 1;
    o.n_max = 3;
    std::ostringstream out, err;
    CHECK(cmd_table(o, out, err) == kExitOk);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "p,a,n,nu,branch");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv(lines[i]);
        REQUIRE(f.size() == 5);
        CHECK(f[0] == "5");
        CHECK(f[1] == "1");
        CHECK(f[2] == std::to_string(i));
        CHECK(f[3] == "1");
    }

    TableOptions one{2, 1, 1, "csv"};
    std::ostringstream out1;
    CHECK(cmd_table(one, out1, err) == kExitOk);
    const auto l1 = lines_of(out1.str());
    REQUIRE(l1.size() == 2);
    CHECK(split_csv(l1[1])[3] == "0");

    TableOptions bad{2, 1, 1, "xml"};
    CHECK(cmd_table(bad, out1, err) == kExitUsage);
}

TEST_CASE("csv_field quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("r<s, (0,2)") == "\"r<s, (0,2)\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(split_csv("1,\"a, b\",\"x\"\"y\"") == std::vector<std::string>{"1", "a, b", "x\"y"});
}

TEST_CASE("table JSON output") {
    TableOptions o{7, 2, 2, "json"};
    std::ostringstream out, err;
    CHECK(cmd_table(o, out, err) == kExitOk);
    const auto j = nlohmann::json::parse(out.str());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["p"] == 7);
    CHECK(j[0]["nu"] == 0);
    CHECK(j[1]["n"] == 2);
    CHECK(j[1]["nu"] == 0);
    CHECK(j[1]["branch"].is_string());
}

TEST_CASE("table rows round-trip through eval with both methods") {
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
        for (std::uint64_t a = 1; a <= 2; ++a) {
            TableOptions t{p, a, 12, "csv"};
            std::ostringstream out, err;
            REQUIRE(cmd_table(t, out, err) == kExitOk);
            const auto lines = lines_of(out.str());
            for (std::size_t i = 1; i < lines.size(); ++i) {
                const auto f = split_csv(lines[i]);
                EvalOptions e;
                e.p = p;
                e.a = a;
                e.n = std::stoull(f[2]);
                e.method = EvalMethod::both;
                e.tier = OracleTier::modular;
                std::ostringstream eo, ee;
                REQUIRE(cmd_eval(e, eo, ee) == kExitOk);
                CHECK(eo.str().find("formula: nu=" + f[3] + "\n") != std::string::npos);
                CHECK(eo.str().find("oracle: nu=" + f[3] + " ") != std::string::npos);
            }
        }
    }
}

TEST_CASE("verify on a small grid is clean and fully covered") {
    VerifyOptions o;
    o.p_set = {2, 3, 5, 7, 11, 13};
    o.a_max = 3;
    o.n_max = 300;
    o.tier = VerifyTier::both;
    const VerifyReport r = run_verify(o);
    CHECK(r.mismatches.empty());
    CHECK(r.uncovered().empty());
    CHECK(r.exit_code() == kExitOk);
    CHECK(r.cells_checked > 1000);
    CHECK(r.comparisons > r.cells_checked);

    const auto j = to_json(r);
    for (const char* key : {"grid", "cells_checked", "comparisons", "mismatches", "branch_coverage", "uncovered",
                            "exit_status", "elapsed_seconds"})
        CHECK_MESSAGE(j.contains(key), key);
    CHECK(j["exit_status"] == 0);
}

TEST_CASE("verify exact tier respects the exact cap") {
    VerifyOptions o;
    o.p_set = {13};
    o.a_max = 1;
    o.n_max = 50;
    o.tier = VerifyTier::exact;
    const VerifyReport r = run_verify(o);
    CHECK(r.effective_cap == kDefaultExactCap);
    CHECK(r.mismatches.empty());
    CHECK(r.exit_code() == kExitOk);
}

TEST_CASE("verify reports a coverage gap on a tiny grid") {
    VerifyOptions o;
    o.p_set = {2};
    o.a_max = 2;
    o.n_max = 3;
    const VerifyReport r = run_verify(o);
    CHECK(r.mismatches.empty());
    CHECK_FALSE(r.uncovered().empty());
    CHECK(r.exit_code() == kExitCoverageGap);
}

TEST_CASE("verify detects a seeded delta mutation") {
    VerifyOptions o;
    o.p_set = {2};
    o.a_max = 3;
    o.n_max = 200;
    o.delta_mutation = "odd:5";
    const VerifyReport r = run_verify(o);
    REQUIRE_FALSE(r.mismatches.empty());
    CHECK(r.exit_code() == kExitMismatch);
    const Mismatch& first = r.mismatches.front();
    CHECK(first.p == 2);
    CHECK(first.n % 6 == 5);
    CHECK(first.formula != first.reference);
}

TEST_CASE("verify rejects bad grids") {
    VerifyOptions o;
    o.p_set = {4};
    std::ostringstream out, err;
    CHECK(cmd_verify(o, out, err) == kExitUsage);
    o.p_set = {2};
    o.delta_mutation = "nope";
    CHECK(cmd_verify(o, out, err) == kExitUsage);
}
