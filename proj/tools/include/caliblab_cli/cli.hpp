#pragma once

#include "caliblab_cli/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace caliblab::cli {

enum ExitCode { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

struct CliConfig {
    std::string command;
    std::string case_name;  // empty: every family (identities) / required elsewhere
    std::string patch;
    std::string generator = "all";  // random | test | all
    int generators = 3;
    int count = 5;
    int quad_order = 8;
    double tol_point = 1e-8;
    double tol_int = 1e-6;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "jsonl";
    bool keep_omega4_1 = false;
    bool closed_omega = false;
    bool finite_difference = false;
    int k = 1;
    int m = 0;  // 0: k + 1
    int equalities = 0;
    bool corrupt = false;
};

// Thrown for anything the user can fix on the command line (exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<ReportRecord> cmd_identities(const CliConfig& cfg);
std::vector<ReportRecord> cmd_theorem(const CliConfig& cfg);
std::vector<ReportRecord> cmd_smith(const CliConfig& cfg);
std::vector<ReportRecord> cmd_minimal(const CliConfig& cfg);
std::vector<ReportRecord> cmd_catalog(const CliConfig& cfg);

// Full front end: parses arguments (and an optional --config JSON file whose
// keys mirror the long flags; flags given on the command line win), runs the
// subcommand and writes the report. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caliblab::cli
