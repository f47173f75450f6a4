#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fluidruin {

struct RunConfig {
    std::string subcommand;
    std::string model;
    std::optional<double> gamma;
    std::optional<long> n_max;
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    std::optional<long long> samples;
    std::uint64_t seed = 1;
    std::string out;  // empty: standard output
    unsigned threads = 1;
    bool allow_truncation = false;
    bool renormalize_inputs = false;
    double epsilon = 0.5;
    double q = 1.0;
    std::vector<double> gammas;
    std::optional<double> horizon;
    double tolerance = 4.0;  // compare: band is tolerance * SE + defect
};

// Each command writes its CSV to `out` (or the --out file) and logs to `err`.
// Failures are reported by throwing DomainError or IoError.
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_psi(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_joint(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_converge(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments and dispatches. Exit codes: 0 ok, 1 domain error (or a
/// failed check), 2 I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fluidruin
