#pragma once

#include <iosfwd>
#include <string>

#include "cli.hpp"

namespace gupqm::cli {

/// Sets a sweepable field by name.
void apply_parameter(RunConfig& config, const std::string& name, double value);

/// Rendered output of one command and its exit status.
struct CommandOutput {
    std::string text;
    int status = kExitOk;
};

CommandOutput cmd_kernel(const RunConfig& config, std::ostream& err);
CommandOutput cmd_energy(const RunConfig& config, std::ostream& err);
CommandOutput cmd_classical(const RunConfig& config, std::ostream& err);
CommandOutput cmd_spectrum(const RunConfig& config, std::ostream& err);
CommandOutput cmd_verify(const RunConfig& config, std::ostream& err);

}  // namespace gupqm::cli
