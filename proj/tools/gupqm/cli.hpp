#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gupqm/model.hpp"

namespace gupqm::cli {

enum class OutputFormat { Csv, Json };

/// Exit statuses of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitInvalid = 2;

struct SweepSpec {
    std::string name;  // beta, theta, omega, mass, hbar, time, q0, qf
    std::vector<double> values;
};

/// Everything a subcommand reads. Zero sizes mean "command default".
struct RunConfig {
    std::string command;
    PhysicalParams params{1.0, 1.0, 0.0, 1.0, 0.0};
    std::size_t grid_n = 0;
    double box = 0.0;
    std::size_t slices = 0;
    SliceScheme scheme = SliceScheme::MomentumSplit;
    std::optional<OutputFormat> format;
    std::string out;  // empty: stdout
    std::uint64_t seed = 20240917;
    std::vector<SweepSpec> sweeps;

    std::string system = "free";  // free, ho, nc
    bool compare_numeric = false;
    double time = 1.0;
    double q0 = 0.0;
    double qf = 1.0;
    double delta_max = 2.0;
    std::size_t delta_n = 9;
    double bound_safety = 0.9;
    std::size_t samples = 17;
    std::size_t levels = 5;
    SpectrumMethod method = SpectrumMethod::Diagonalization;
    bool strict = false;
    std::string inject_fault;

    OutputFormat resolved_format() const;
};

/// Parses argv (including the subcommand). Throws CLI11 exceptions on bad input.
RunConfig parse_arguments(int argc, const char* const* argv);

/// Runs a parsed configuration, writing to config.out or to `out`.
/// Returns an exit status; diagnostics go to `err`.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_arguments + execute with exit-code mapping.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Cartesian product of the sweeps applied to the base configuration, first
/// sweep outermost. A configuration without sweeps yields itself.
std::vector<RunConfig> expand_sweeps(const RunConfig& config);

}  // namespace gupqm::cli
