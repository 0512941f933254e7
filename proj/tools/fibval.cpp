// fibval: p-adic valuations of Fibonomial coefficients.
//
//   fibval eval   --p 2 --m 6 --k 2 --explain
//   fibval eval   --p 7 --a 1 --n 1 --method both
//   fibval scan   --p 2 --a 3 --n-max 60 --predicate odd_fibonomial
//   fibval verify --p-set 2,3,5,7 --a-max 3 --n-max 500 --tier modular
//   fibval table  --p 5 --a 1 --n-max 3 --format csv

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "fibval/commands.hpp"

namespace {

using namespace fibval;
using namespace fibval::cli;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic valuations of Fibonomial coefficients"};
    app.require_subcommand(1);

    EvalOptions eval_opts;
    std::uint64_t eval_a = 0, eval_n = 0, eval_m = 0, eval_k = 0;
    std::string eval_tier;
    auto* eval = app.add_subcommand("eval", "Evaluate one valuation, optionally against the oracle");
    eval->add_option("--p", eval_opts.p, "Prime")->required();
    auto* opt_a = eval->add_option("--a", eval_a, "Exponent a of C(p^a n, n)_F");
    auto* opt_n = eval->add_option("--n", eval_n, "n of C(p^a n, n)_F");
    auto* opt_m = eval->add_option("--m", eval_m, "m of C(m, k)_F");
    auto* opt_k = eval->add_option("--k", eval_k, "k of C(m, k)_F");
    eval->add_option("--method", eval_opts.method, "formula | oracle | both")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, EvalMethod>{
                {"formula", EvalMethod::formula}, {"oracle", EvalMethod::oracle}, {"both", EvalMethod::both}},
            CLI::ignore_case));
    eval->add_option("--tier", eval_tier, "Oracle tier: exact | modular")->check(CLI::IsMember({"exact", "modular"}));
    eval->add_flag("--explain", eval_opts.explain, "Print the branch trace");

    ScanOptions scan_opts;
    auto* scan = app.add_subcommand("scan", "List n <= n-max satisfying a divisibility predicate");
    scan->add_option("--p", scan_opts.p, "Prime")->required();
    scan->add_option("--a", scan_opts.a, "Exponent a")->required();
    scan->add_option("--n-max", scan_opts.n_max, "Largest n")->required();
    scan->add_option("--predicate", scan_opts.predicate, "divisible | not_divisible | odd_fibonomial")
        ->required()
        ->transform(CLI::CheckedTransformer(std::map<std::string, ScanPredicate>{
            {"divisible", ScanPredicate::divisible},
            {"not_divisible", ScanPredicate::not_divisible},
            {"odd_fibonomial", ScanPredicate::odd_fibonomial}}));
    scan->add_flag("--json", scan_opts.json, "Emit a JSON array instead of one n per line");

    VerifyOptions verify_opts;
    std::string delta_mutation;
    auto* verify = app.add_subcommand("verify", "Check closed forms against the oracle over a grid");
    verify->add_option("--p-set", verify_opts.p_set, "Comma-separated primes")->required()->delimiter(',');
    verify->add_option("--a-max", verify_opts.a_max, "Largest exponent a")->required();
    verify->add_option("--n-max", verify_opts.n_max, "Largest n")->required();
    verify->add_option("--index-cap", verify_opts.index_cap, "Largest index p^a n to check")
        ->capture_default_str();
    verify->add_option("--tier", verify_opts.tier, "exact | modular | both")
        ->transform(CLI::CheckedTransformer(std::map<std::string, VerifyTier>{
            {"exact", VerifyTier::exact}, {"modular", VerifyTier::modular}, {"both", VerifyTier::both}}));
    verify->add_option("--mutate-delta", delta_mutation,
                       "Testing aid: flip one constant of the 2-adic delta table (e.g. even:3)");

    TableOptions table_opts;
    auto* table = app.add_subcommand("table", "Emit p,a,n,nu,branch rows for n = 1..n-max");
    table->add_option("--p", table_opts.p, "Prime")->required();
    table->add_option("--a", table_opts.a, "Exponent a")->required();
    table->add_option("--n-max", table_opts.n_max, "Largest n")->required();
    table->add_option("--format", table_opts.format, "csv | json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*eval) {
            if (*opt_a) eval_opts.a = eval_a;
            if (*opt_n) eval_opts.n = eval_n;
            if (*opt_m) eval_opts.m = eval_m;
            if (*opt_k) eval_opts.k = eval_k;
            if (!eval_tier.empty()) eval_opts.tier = eval_tier == "exact" ? OracleTier::exact : OracleTier::modular;
            return cmd_eval(eval_opts, std::cout, std::cerr);
        }
        if (*scan) return cmd_scan(scan_opts, std::cout, std::cerr);
        if (*verify) {
            if (!delta_mutation.empty()) verify_opts.delta_mutation = delta_mutation;
            return cmd_verify(verify_opts, std::cout, std::cerr);
        }
        if (*table) return cmd_table(table_opts, std::cout, std::cerr);
    } catch (const domain_error& e) {
        std::cerr << "fibval: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "fibval: internal error: " << e.what() << "\n";
        return 70;
    }
    return kExitUsage;
}
