#pragma once

#include <string>
#include <vector>

#include "table.hpp"

namespace gupqm::cli {

enum class CheckStatus { Pass, Warn, Fail };

std::string_view to_string(CheckStatus s);

struct CheckResult {
    std::string module;
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

/// A printed formula that disagrees with its oracle. Never affects the exit status.
struct Finding {
    std::string name;
    std::string summary;
    Json data;
};

struct VerifyReport {
    bool strict = false;
    std::string fault;
    std::vector<CheckResult> checks;
    std::vector<Finding> findings;
    Json nc_term_map;

    std::size_t count(CheckStatus s) const;
    /// 0 iff no hard check failed (and, when strict, none warned).
    int exit_status() const;
    Json to_json() const;
    Table to_table() const;
};

/// Known fault names for the self-test; empty means none.
const std::vector<std::string>& known_faults();

/// Runs every invariant check and printed-vs-oracle comparison.
/// Throws InvalidArgument for an unknown fault name.
VerifyReport run_verify(bool strict, const std::string& fault);

/// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gupqm::cli
