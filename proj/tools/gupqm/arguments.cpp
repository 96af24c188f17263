#include <cmath>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "internal.hpp"

namespace gupqm::cli {

namespace {

/// Flat key-value JSON config: {"beta": 1e-3, "grid-n": 512, "sweep": ["beta=0,1e-3"]}.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(input);
        } catch (const nlohmann::json::parse_error& e) {
            throw CLI::ConfigError(std::string("config: ") + e.what());
        }
        if (!doc.is_object()) throw CLI::ConfigError("config: top level must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : doc.items()) {
            CLI::ConfigItem item;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar(key, v));
            } else {
                item.inputs.push_back(scalar(key, value));
            }
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    static std::string scalar(const std::string& key, const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConfigError("config: key '" + key + "' must be a string, number, boolean or flat array");
    }
};

struct RawOptions {
    std::vector<std::string> sweeps;
    std::string compare;
    std::string format;
    std::string scheme = "momentum-split";
    std::string method = "diagonalize";
};

SweepSpec parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw CLI::ValidationError("--sweep", "expected name=v1,v2,... got '" + text + "'");
    }
    SweepSpec spec;
    spec.name = text.substr(0, eq);
    static const char* const kNames[] = {"beta", "theta", "omega", "mass", "hbar", "time", "q0", "qf"};
    bool known = false;
    for (const char* n : kNames) known = known || spec.name == n;
    if (!known) throw CLI::ValidationError("--sweep", "unknown sweep parameter '" + spec.name + "'");
    std::stringstream ss(text.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || item.empty() || !std::isfinite(v)) {
            throw CLI::ValidationError("--sweep", "value '" + item + "' is not a finite number");
        }
        spec.values.push_back(v);
    }
    if (spec.values.empty()) throw CLI::ValidationError("--sweep", "no values for '" + spec.name + "'");
    return spec;
}

void configure_app(CLI::App& app, RunConfig& cfg, RawOptions& raw) {
    app.fallthrough();
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "Flat key-value JSON file; command-line flags win");

    app.add_subcommand("kernel", "Kernel tables: free, oscillator, or noncommutative-plane");
    app.add_subcommand("energy", "Ground-state energy: formula, diagonalization, imaginary time");
    app.add_subcommand("classical", "Classical trajectories, EOM residuals, action decomposition");
    app.add_subcommand("verify", "Invariant suite and printed-vs-oracle findings");
    app.add_subcommand("spectrum", "Lowest levels against first-order perturbation theory");

    auto& p = cfg.params;
    app.add_option("--mass", p.mass, "Particle mass")->capture_default_str();
    app.add_option("--hbar", p.hbar, "Reduced Planck constant")->capture_default_str();
    app.add_option("--beta", p.beta, "GUP parameter")->capture_default_str();
    app.add_option("--omega", p.omega, "Oscillator frequency")->capture_default_str();
    app.add_option("--theta", p.theta, "Noncommutativity parameter")->capture_default_str();
    app.add_option("--grid-n", cfg.grid_n, "Lattice points (0: command default)");
    app.add_option("--box", cfg.box, "Box length (0: command default)");
    app.add_option("--slices", cfg.slices, "Time slices (0: command default)");
    app.add_option("--scheme", raw.scheme, "Slicing scheme")
        ->check(CLI::IsMember({"short-time", "momentum-split"}))
        ->capture_default_str();
    app.add_option("--format", raw.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", cfg.out, "Output file (default stdout)");
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--sweep", raw.sweeps, "Parameter sweep name=v1,v2,... (repeatable)");

    app.add_option("--system", cfg.system, "free | ho | nc")->check(CLI::IsMember({"free", "ho", "nc"}));
    app.add_option("--compare", raw.compare, "Add a lattice comparison")->check(CLI::IsMember({"numeric"}));
    app.add_option("--time", cfg.time, "Propagation time T")->capture_default_str();
    app.add_option("--q0", cfg.q0, "Initial position")->capture_default_str();
    app.add_option("--qf", cfg.qf, "Final position")->capture_default_str();
    app.add_option("--delta-max", cfg.delta_max, "Largest |qf - q0| in kernel tables")->capture_default_str();
    app.add_option("--delta-n", cfg.delta_n, "Displacement samples in kernel tables")->capture_default_str();
    app.add_option("--bound-safety", cfg.bound_safety, "Fraction of 1/sqrt(2 beta) a comparison lattice may reach")
        ->capture_default_str();
    app.add_option("--samples", cfg.samples, "Trajectory samples written by classical")->capture_default_str();
    app.add_option("--levels", cfg.levels, "Levels reported by spectrum")->capture_default_str();
    app.add_option("--method", raw.method, "Spectrum method")
        ->check(CLI::IsMember({"diagonalize", "imaginary-time"}))
        ->capture_default_str();
    app.add_flag("--strict", cfg.strict, "verify: treat warnings as failures");
    app.add_option("--inject-fault", cfg.inject_fault, "verify: corrupt one formula (self-test)");
}

void finalize(const CLI::App& app, RunConfig& cfg, const RawOptions& raw) {
    for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    for (const auto& s : raw.sweeps) cfg.sweeps.push_back(parse_sweep(s));
    cfg.compare_numeric = raw.compare == "numeric";
    cfg.scheme = raw.scheme == "short-time" ? SliceScheme::ShortTimeKernel : SliceScheme::MomentumSplit;
    cfg.method = raw.method == "imaginary-time" ? SpectrumMethod::ImaginaryTime : SpectrumMethod::Diagonalization;
    if (raw.format == "csv") cfg.format = OutputFormat::Csv;
    if (raw.format == "json") cfg.format = OutputFormat::Json;
    if (cfg.delta_n < 1) throw CLI::ValidationError("--delta-n", "must be >= 1");
    if (cfg.samples < 2) throw CLI::ValidationError("--samples", "must be >= 2");
}

}  // namespace

RunConfig parse_arguments(int argc, const char* const* argv) {
    CLI::App app{"gupqm"};
    RunConfig cfg;
    RawOptions raw;
    configure_app(app, cfg, raw);
    app.parse(argc, argv);
    finalize(app, cfg, raw);
    return cfg;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Path-integral and spectral tools for GUP quantum mechanics", "gupqm"};
    RunConfig cfg;
    RawOptions raw;
    configure_app(app, cfg, raw);
    try {
        app.parse(argc, argv);
        finalize(app, cfg, raw);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "gupqm: " << e.what() << '\n';
        return kExitInvalid;
    }
    return execute(cfg, out, err);
}

OutputFormat RunConfig::resolved_format() const {
    if (format) return *format;
    return command == "energy" || command == "verify" ? OutputFormat::Json : OutputFormat::Csv;
}

std::vector<RunConfig> expand_sweeps(const RunConfig& config) {
    std::vector<RunConfig> points{config};
    for (const auto& sweep : config.sweeps) {
        std::vector<RunConfig> next;
        for (const auto& base : points) {
            for (double v : sweep.values) {
                RunConfig c = base;
                apply_parameter(c, sweep.name, v);
                next.push_back(std::move(c));
            }
        }
        points = std::move(next);
    }
    return points;
}

}  // namespace gupqm::cli
