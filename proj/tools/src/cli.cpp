#include "caliblab_cli/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace caliblab::cli {

namespace {

void add_shared_options(CLI::App& sub, CliConfig& cfg) {
    sub.add_option("--case", cfg.case_name, "um, associative, coassociative or cayley (g2 / spin7 accepted)");
    sub.add_option("--patch", cfg.patch, "catalog patch id (smith: map id)");
    sub.add_option("--generator", cfg.generator, "random, test or all")
        ->check(CLI::IsMember({"random", "test", "all"}));
    sub.add_option("--generators", cfg.generators, "random generators per patch")->check(CLI::NonNegativeNumber);
    sub.add_option("--count", cfg.count, "random maps (smith) or vector fields (minimal)")->check(CLI::NonNegativeNumber);
    sub.add_option("--quad-order", cfg.quad_order, "quadrature points per axis")->check(CLI::Range(1, 64));
    sub.add_option("--tol-point", cfg.tol_point, "pointwise tolerance")->check(CLI::PositiveNumber);
    sub.add_option("--tol-int", cfg.tol_int, "integrated tolerance")->check(CLI::PositiveNumber);
    sub.add_option("--seed", cfg.seed);
    sub.add_option("--out", cfg.out, "report path (default: stdout)");
    sub.add_option("--format", cfg.format)->check(CLI::IsMember({"jsonl", "csv"}));
    sub.add_flag("--keep-omega4-1", cfg.keep_omega4_1, "Cayley: keep the Omega^4_1 part of d gamma dot");
    sub.add_flag("--closed-omega", cfg.closed_omega, "flat background (d omega = 0) instead of a conformal one");
    sub.add_flag("--fd", cfg.finite_difference, "cross-check theorem A by finite differences where possible");
    sub.add_option("--k", cfg.k, "U(m): complex dimension of the submanifolds");
    sub.add_option("--m", cfg.m, "U(m): complex dimension of the ambient space (default k + 1)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"calibration geometry lab", "caliblab"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_config("--config", "", "TOML/INI file; keys under [subcommand] mirror the long flags");
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        std::vector<ReportRecord> (*fn)(const CliConfig&);
    };
    const Sub subs[] = {
        {"identities", "exact contraction identities (and optional equality sweeps)", cmd_identities},
        {"theorem", "first-variation experiments on the patch catalog", cmd_theorem},
        {"smith", "k-energy inequality chain and Smith residuals", cmd_smith},
        {"minimal", "flow first variation vs div X^T - <X^perp, H>", cmd_minimal},
        {"catalog", "list built-in patches, generators and smith maps", cmd_catalog},
    };
    std::vector<CLI::App*> apps;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->fallthrough();  // --config may follow the subcommand
        add_shared_options(*sub, cfg);
        apps.push_back(sub);
    }
    apps[0]->add_option("--equalities", cfg.equalities, "random tuples for the equality sweeps (0: skip)");
    apps[0]->add_flag("--corrupt-structure-constant", cfg.corrupt)->group("");

    // the vector overload of parse() expects the arguments in reverse order
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "caliblab: " << e.what() << '\n';
        return kExitConfig;
    }

    std::size_t which = 0;
    while (!apps[which]->parsed()) ++which;
    cfg.command = subs[which].name;

    std::vector<ReportRecord> records;
    try {
        records = subs[which].fn(cfg);
    } catch (const ConfigError& e) {
        err << "caliblab: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "caliblab: " << cfg.command << " failed: " << e.what() << '\n';
        return kExitFail;
    }
    sort_records(records);

    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            err << "caliblab: cannot open " << cfg.out << '\n';
            return kExitConfig;
        }
    }
    std::ostream& os = cfg.out.empty() ? out : file;
    if (cfg.format == "csv")
        write_csv(os, records);
    else
        write_jsonl(os, records);

    int failed = 0, expected = 0;
    for (const auto& r : records) {
        failed += !r.pass;
        expected += r.expected_fail;
    }
    err << cfg.command << ": " << records.size() << " records, " << failed << " failed";
    if (expected) err << ", " << expected << " documented expected-fail";
    err << '\n';
    return failed ? kExitFail : kExitPass;
}

}  // namespace caliblab::cli
