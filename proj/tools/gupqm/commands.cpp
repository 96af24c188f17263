#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include "gupqm/analytic_kernels.hpp"
#include "gupqm/classical.hpp"
#include "gupqm/errors.hpp"
#include "gupqm/numeric_propagator.hpp"
#include "gupqm/perturbation.hpp"
#include "internal.hpp"
#include "table.hpp"
#include "verify.hpp"

namespace gupqm::cli {

namespace {

constexpr std::size_t kPathMesh = 2049;

std::string render(const Table& table, const RunConfig& cfg, const Json& meta = Json::object()) {
    std::ostringstream os;
    if (cfg.resolved_format() == OutputFormat::Csv) {
        table.write_csv(os);
    } else {
        Json doc = Json::object();
        doc["command"] = cfg.command;
        for (const auto& [k, v] : meta.items()) doc[k] = v;
        doc["rows"] = table.to_json();
        os << doc.dump(2) << '\n';
    }
    return os.str();
}

std::vector<double> displacements(const RunConfig& cfg) {
    if (cfg.delta_n == 1) return {cfg.delta_max};
    std::vector<double> d(cfg.delta_n);
    for (std::size_t i = 0; i < cfg.delta_n; ++i) {
        d[i] = cfg.delta_max * static_cast<double>(i) / static_cast<double>(cfg.delta_n - 1);
    }
    return d;
}

double oscillator_box(const RunConfig& cfg) {
    if (cfg.box > 0.0) return cfg.box;
    const auto& p = cfg.params;
    return 20.0 * std::sqrt(p.hbar / (p.mass * p.omega));
}

void require_omega(const RunConfig& cfg) {
    if (!(cfg.params.omega > 0.0)) throw InvalidArgument(cfg.command + ": --omega must be > 0");
}

void report(std::ostream& err, const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.severity == Severity::Info) continue;
        err << "gupqm: " << to_string(d.severity) << ": " << d.code << ": " << d.message << " (" << format_double(d.value)
            << ")\n";
    }
}

// kernel ------------------------------------------------------------------

struct LatticeKernel {
    KernelMatrix kernel;
    std::size_t source;
};

LatticeKernel lattice_kernel(const RunConfig& cfg, const PotentialSpec& pot, double default_box,
                             std::size_t default_n, std::ostream& err) {
    const auto& p = cfg.params;
    const double box = cfg.box > 0.0 ? cfg.box : default_box;
    const std::size_t n = cfg.grid_n > 0 ? cfg.grid_n : default_n;
    const SpatialGrid grid = SpatialGrid::centered(box, n);
    const auto diags = validate(p, grid, cfg.bound_safety);
    report(err, diags);
    throw_if_errors(diags, "kernel --compare numeric");
    const std::size_t slices = cfg.slices > 0 ? cfg.slices : 256;
    const TimeSlicing slicing = TimeSlicing::create(cfg.time, slices, cfg.scheme);
    if (cfg.scheme == SliceScheme::ShortTimeKernel) report(err, short_time_diagnostics(p, grid, slicing.tau(), pot));
    return {compose_kernel(p, grid, slicing, pot), grid.index_of(cfg.q0)};
}

CommandOutput kernel_table(const RunConfig& base, std::ostream& err) {
    Table table({"system", "mass", "hbar", "beta", "omega", "theta", "T", "q0", "qf", "delta", "real", "imag",
                 "modulus", "phase", "scheme", "provenance"});
    const auto add = [&](const RunConfig& c, const std::string& system, double q0, double delta, complex k,
                         const std::string& scheme, const std::string& prov) {
        const auto& p = c.params;
        table.add_row({system, p.mass, p.hbar, p.beta, p.omega, p.theta, c.time, q0, q0 + delta, delta, k.real(),
                       k.imag(), std::abs(k), std::arg(k), scheme, prov});
    };
    const auto add_summary = [&](const RunConfig& c, const std::string& metric, double value) {
        const auto& p = c.params;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        table.add_row({c.system, p.mass, p.hbar, p.beta, p.omega, p.theta, c.time, nan, nan, nan, nan, nan, value, nan,
                       "summary", metric});
    };

    for (const RunConfig& cfg : expand_sweeps(base)) {
        require_valid(cfg.params);
        const auto& p = cfg.params;
        const std::vector<double> deltas = displacements(cfg);

        if (cfg.system == "nc") {
            if (cfg.compare_numeric) err << "gupqm: warning: --compare numeric is ignored for --system nc\n";
            double worst = 0.0;
            for (double d : deltas) {
                const Vec2 x0{cfg.q0, 0.0};
                const Vec2 xf{cfg.q0 + d, 0.0};
                const complex exact = nc_free_kernel(p.mass, p.hbar, p.theta, x0, xf, cfg.time);
                const complex expanded = nc_free_kernel_expanded(p.mass, p.hbar, p.theta, x0, xf, cfg.time);
                add(cfg, "nc", cfg.q0, d, exact, "closed-form", to_string(Provenance::PrintedFormula).data());
                add(cfg, "nc", cfg.q0, d, expanded, "expanded", to_string(Provenance::PrintedFormula).data());
                add(cfg, "free", cfg.q0, d, free_kernel_standard(p, cfg.q0, cfg.q0 + d, cfg.time), "standard",
                    to_string(Provenance::Derived).data());
                worst = std::max(worst, std::abs(expanded - exact) / std::abs(exact));
            }
            add_summary(cfg, "max-relative-expansion-defect", worst);
            continue;
        }

        const bool ho = cfg.system == "ho";
        if (ho) require_omega(cfg);
        double q0 = cfg.q0;
        std::optional<LatticeKernel> lattice;
        if (cfg.compare_numeric) {
            const PotentialSpec pot = ho ? PotentialSpec::harmonic(p.omega) : PotentialSpec::free();
            lattice = lattice_kernel(cfg, pot, ho ? oscillator_box(cfg) : 160.0, ho ? 512 : 1024, err);
            q0 = lattice->kernel.grid().position(lattice->source);
        }

        std::vector<complex> reference;
        for (double d : deltas) {
            const double qf = q0 + d;
            if (!ho) {
                reference.push_back(free_kernel_gup(p, q0, qf, cfg.time));
                add(cfg, "free", q0, d, reference.back(), "closed-form", "printed-formula");
            } else if (p.beta == 0.0) {
                reference.push_back(mehler_kernel(p, q0, qf, cfg.time));
                add(cfg, "ho", q0, d, reference.back(), "closed-form", "printed-formula");
            } else {
                add(cfg, "ho", q0, d, ho_kernel_gup(p, q0, qf, cfg.time, HoActionSource::Printed), "closed-form",
                    "printed-formula");
                reference.push_back(ho_kernel_gup(p, q0, qf, cfg.time, HoActionSource::Quadrature));
                add(cfg, "ho", q0, d, reference.back(), "closed-form-quadrature-action", "derived");
            }
        }
        if (!lattice) continue;

        const std::vector<complex> numeric = interpolate_kernel(lattice->kernel, lattice->source, deltas);
        double worst = 0.0;
        double worst_modulus = 0.0;
        double worst_phase = 0.0;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            add(cfg, cfg.system, q0, deltas[i], numeric[i], std::string(to_string(lattice->kernel.scheme())), "oracle");
            worst = std::max(worst, std::abs(numeric[i] - reference[i]) / std::abs(reference[i]));
            worst_modulus = std::max(worst_modulus, std::abs(std::abs(numeric[i]) / std::abs(reference[i]) - 1.0));
            worst_phase = std::max(worst_phase, std::abs(std::arg(numeric[i] / reference[i])));
        }
        add_summary(cfg, "max-relative-deviation", worst);
        add_summary(cfg, "max-relative-modulus-deviation", worst_modulus);
        add_summary(cfg, "max-phase-deviation", worst_phase);
    }
    return {render(table, base), kExitOk};
}

// energy ------------------------------------------------------------------

Json grid_json(const SpatialGrid& g) {
    Json j = Json::object();
    j["n"] = g.size();
    j["box"] = g.length();
    j["q_min"] = g.q_min();
    j["q_max"] = g.q_max();
    j["dq"] = g.spacing();
    return j;
}

}  // namespace

void apply_parameter(RunConfig& c, const std::string& name, double v) {
    if (name == "beta") c.params.beta = v;
    else if (name == "theta") c.params.theta = v;
    else if (name == "omega") c.params.omega = v;
    else if (name == "mass") c.params.mass = v;
    else if (name == "hbar") c.params.hbar = v;
    else if (name == "time") c.time = v;
    else if (name == "q0") c.q0 = v;
    else if (name == "qf") c.qf = v;
    else throw InvalidArgument("unknown sweep parameter '" + name + "'");
}

CommandOutput cmd_kernel(const RunConfig& config, std::ostream& err) { return kernel_table(config, err); }

CommandOutput cmd_energy(const RunConfig& base, std::ostream& err) {
    int status = kExitOk;
    Json points = Json::array();
    Table table({"mass", "hbar", "beta", "omega", "E0_formula", "E0_diag", "E0_imagtime", "diag_minus_formula",
                 "formula_tolerance", "imagtime_rel_dev", "grid_n", "box", "seed", "iterations", "provenance"});
    std::vector<std::pair<PhysicalParams, double>> diag_by_params;

    for (const RunConfig& cfg : expand_sweeps(base)) {
        require_omega(cfg);
        require_valid(cfg.params);
        const auto& p = cfg.params;
        const SpatialGrid grid = SpatialGrid::centered(oscillator_box(cfg), cfg.grid_n > 0 ? cfg.grid_n : 512);
        const PotentialSpec pot = PotentialSpec::harmonic(p.omega);
        report(err, validate(p));

        const double formula = ground_state_energy_formula(p);
        const GroundState diag = ground_state_energy_numeric(p, grid, pot, SpectrumMethod::Diagonalization);
        ImaginaryTimeOptions opt;
        opt.seed = cfg.seed;
        std::optional<GroundState> imag;
        std::string imag_error;
        try {
            imag = ground_state_energy_numeric(p, grid, pot, SpectrumMethod::ImaginaryTime, opt);
        } catch (const ConvergenceError& e) {
            imag_error = e.what();
            err << "gupqm: warning: " << imag_error << '\n';
            if (cfg.strict) status = kExitInvariant;
        }
        const double hw = p.hbar * p.omega;
        const double eps = p.epsilon_ho();
        const double tolerance = std::max(1e-4 * hw, 20.0 * eps * eps * hw);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double e_imag = imag ? imag->energy : nan;
        const double imag_dev = imag ? std::abs(e_imag - diag.energy) / std::abs(diag.energy) : nan;
        diag_by_params.emplace_back(p, diag.energy);

        Json point = Json::object();
        point["mass"] = p.mass;
        point["hbar"] = p.hbar;
        point["beta"] = p.beta;
        point["omega"] = p.omega;
        point["E0_formula"] = formula;
        point["E0_diag"] = diag.energy;
        point["E0_imagtime"] = json_number(e_imag);
        Json dev = Json::object();
        dev["diag_minus_formula"] = diag.energy - formula;
        dev["formula_tolerance"] = tolerance;
        dev["within_tolerance"] = std::abs(diag.energy - formula) <= tolerance;
        dev["imagtime_rel_dev"] = json_number(imag_dev);
        dev["imagtime_within_1e-4"] = imag ? Json(imag_dev <= 1e-4) : Json(nullptr);
        point["deviations"] = dev;
        point["grid"] = grid_json(grid);
        Json it = Json::object();
        it["seed"] = cfg.seed;
        it["iterations"] = imag ? Json(imag->iterations) : Json(nullptr);
        it["step"] = imag ? json_number(imag->step) : Json(nullptr);
        if (!imag_error.empty()) it["error"] = imag_error;
        point["imaginary_time"] = it;
        Json prov = Json::object();
        prov["E0_formula"] = "printed-formula";
        prov["E0_diag"] = "oracle";
        prov["E0_imagtime"] = "oracle";
        point["provenance"] = prov;
        points.push_back(point);

        table.add_row({p.mass, p.hbar, p.beta, p.omega, formula, diag.energy, e_imag, diag.energy - formula, tolerance,
                       imag_dev, static_cast<std::int64_t>(grid.size()), grid.length(),
                       static_cast<std::int64_t>(cfg.seed),
                       static_cast<std::int64_t>(imag ? imag->iterations : 0),
                       "E0_formula:printed-formula;E0_diag:oracle;E0_imagtime:oracle"});
    }

    // Monotonicity in beta among points that differ only in beta.
    Json monotone = nullptr;
    if (diag_by_params.size() >= 2) {
        auto sorted = diag_by_params;
        const auto key = [](const PhysicalParams& p) { return std::make_tuple(p.mass, p.hbar, p.omega); };
        bool same = std::all_of(sorted.begin(), sorted.end(),
                                [&](const auto& e) { return key(e.first) == key(sorted.front().first); });
        if (same) {
            std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first.beta < b.first.beta; });
            bool inc = true;
            for (std::size_t i = 1; i < sorted.size(); ++i) {
                if (sorted[i].first.beta > sorted[i - 1].first.beta) inc = inc && sorted[i].second > sorted[i - 1].second;
            }
            monotone = inc;
        }
    }

    if (base.resolved_format() == OutputFormat::Csv) {
        std::ostringstream os;
        table.write_csv(os);
        return {os.str(), status};
    }
    Json doc = Json::object();
    doc["command"] = "energy";
    doc["seed"] = base.seed;
    doc["points"] = points;
    doc["monotone_in_beta"] = monotone;
    return {doc.dump(2) + "\n", status};
}

CommandOutput cmd_classical(const RunConfig& base, std::ostream& err) {
    Table table({"kind", "system", "mass", "beta", "omega", "T", "q0", "qf", "name", "t", "value", "provenance"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> betas;
    std::vector<double> residuals;
    bool single_family = true;
    std::optional<std::tuple<double, double, double, double, double>> family;

    for (const RunConfig& cfg : expand_sweeps(base)) {
        require_valid(cfg.params);
        const auto& p = cfg.params;
        const bool ho = cfg.system == "ho";
        if (cfg.system == "nc") throw InvalidArgument("classical: --system must be free or ho");
        if (ho) require_omega(cfg);
        const double omega_col = ho ? p.omega : 0.0;
        const auto row = [&](const std::string& kind, const std::string& name, double t, double value,
                             Provenance prov) {
            table.add_row({kind, cfg.system, p.mass, p.beta, omega_col, cfg.time, cfg.q0, cfg.qf, name, t, value,
                           std::string(to_string(prov))});
        };

        const PhysicalParams pp = ho ? p : p.with_omega(0.0);
        ClassicalPath path;
        if (ho) {
            auto [traj, c] = ho_trajectory(pp, cfg.q0, cfg.qf, cfg.time, kPathMesh);
            path = std::move(traj);
            row("constant", "A", nan, c.A, Provenance::PrintedFormula);
            row("constant", "B", nan, c.B, Provenance::PrintedFormula);
            row("constant", "F", nan, c.F, Provenance::PrintedFormula);
            row("constant", "H", nan, c.H, Provenance::PrintedFormula);
        } else {
            path = free_path(cfg.q0, cfg.qf, cfg.time, kPathMesh);
        }
        const PathDerivatives d = differentiate(path);
        const std::size_t stride = (path.size() - 1) / (cfg.samples - 1);
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            const std::size_t i = std::min(s * stride, path.size() - 1);
            row("trajectory", "q", path.times[i], path.positions[i], Provenance::PrintedFormula);
            row("trajectory", "qdot", path.times[i], d.velocity[i], Provenance::Oracle);
        }
        const double residual = eom_residual(pp, path);
        row("residual", "eom_residual", nan, residual, Provenance::Oracle);

        const ActionValue free = free_action(pp, cfg.q0, cfg.qf, cfg.time);
        if (ho) {
            const PotentialSpec pot = PotentialSpec::harmonic(p.omega);
            const auto [path0, c0] = ho_trajectory(pp.with_beta(0.0), cfg.q0, cfg.qf, cfg.time, kPathMesh);
            row("action", "s0_printed", nan, ho_action_beta0(pp, cfg.q0, cfg.qf, cfg.time), Provenance::PrintedFormula);
            row("action", "s0_quadrature", nan, action_quadrature(pp, path0, pot, LagrangianOrder::Beta1).s0,
                Provenance::Oracle);
            row("action", "s1_printed", nan, ho_action_beta1_printed(pp, cfg.q0, cfg.qf, cfg.time).value,
                Provenance::PrintedFormula);
            row("action", "s1_quadrature", nan, ho_action_beta1_quadrature(pp, cfg.q0, cfg.qf, cfg.time, kPathMesh).value,
                Provenance::Oracle);
            row("action", "s0_free", nan, free.s0, Provenance::PrintedFormula);
            row("action", "s1_free", nan, free.s1, Provenance::PrintedFormula);
        } else {
            const ActionValue q = action_quadrature(pp, path, PotentialSpec::free(), LagrangianOrder::Beta1);
            row("action", "s0_printed", nan, free.s0, Provenance::PrintedFormula);
            row("action", "s0_quadrature", nan, q.s0, Provenance::Oracle);
            row("action", "s1_printed", nan, free.s1, Provenance::PrintedFormula);
            row("action", "s1_quadrature", nan, q.s1, Provenance::Oracle);
        }

        if (ho && p.beta > 0.0) {
            const auto f = std::make_tuple(p.mass, p.omega, cfg.time, cfg.q0, cfg.qf);
            if (family && *family != f) single_family = false;
            family = f;
            betas.push_back(p.beta);
            residuals.push_back(residual);
        }
    }
    if (single_family && betas.size() >= 2) {
        const double slope = loglog_slope(betas, residuals);
        table.add_row({"summary", base.system, nan, nan, nan, nan, nan, nan, "eom_residual_slope", nan, slope,
                       std::string(to_string(Provenance::Derived))});
    } else if (betas.size() >= 2) {
        err << "gupqm: note: residual slope skipped, sweep varies more than beta\n";
    }
    return {render(table, base), kExitOk};
}

CommandOutput cmd_spectrum(const RunConfig& base, std::ostream& err) {
    Table table({"system", "mass", "hbar", "beta", "omega", "level", "energy", "reference", "first_order", "deviation",
                 "method", "provenance"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::map<std::size_t, std::vector<std::pair<double, double>>> deviations;

    for (const RunConfig& cfg : expand_sweeps(base)) {
        require_valid(cfg.params);
        const auto& p = cfg.params;
        const bool ho = cfg.system != "free";
        if (cfg.system == "nc") throw InvalidArgument("spectrum: --system must be free or ho");
        if (ho) require_omega(cfg);
        report(err, validate(p));
        const std::size_t n = cfg.grid_n > 0 ? cfg.grid_n : 512;
        const double box = ho ? oscillator_box(cfg) : (cfg.box > 0.0 ? cfg.box : 20.0);
        const SpatialGrid grid = SpatialGrid::centered(box, n);
        const PotentialSpec pot = ho ? PotentialSpec::harmonic(p.omega) : PotentialSpec::free();
        const PhysicalParams pp = ho ? p : p.with_omega(0.0);
        const double omega_col = ho ? p.omega : 0.0;

        std::vector<double> energies;
        if (cfg.method == SpectrumMethod::ImaginaryTime) {
            if (!ho) throw InvalidArgument("spectrum: imaginary time needs --system ho");
            ImaginaryTimeOptions opt;
            opt.seed = cfg.seed;
            energies.push_back(ground_state_energy_numeric(pp, grid, pot, SpectrumMethod::ImaginaryTime, opt).energy);
        } else {
            energies = excited_levels(pp, grid, pot, cfg.levels).eigenvalues;
        }

        if (ho) {
            const std::size_t dim = std::max<std::size_t>(32, energies.size() + 8);
            const OscillatorBasis basis = OscillatorBasis::create(dim, pp);
            for (std::size_t k = 0; k < energies.size(); ++k) {
                const double zeroth = p.hbar * p.omega * (static_cast<double>(k) + 0.5);
                const double first = first_order_correction(basis, pp, k);
                const double dev = energies[k] - (zeroth + first);
                table.add_row({cfg.system, p.mass, p.hbar, p.beta, omega_col, static_cast<std::int64_t>(k), energies[k],
                               zeroth + first, first, dev, std::string(to_string(cfg.method)),
                               "energy:oracle;reference:derived"});
                if (p.beta > 0.0 && k < 3) deviations[k].emplace_back(p.beta, dev);
            }
        } else {
            Eigen::VectorXd disp = kinetic_dispersion(pp, grid, KineticOrder::Beta1);
            std::vector<double> ref(disp.data(), disp.data() + disp.size());
            std::sort(ref.begin(), ref.end());
            for (std::size_t k = 0; k < energies.size(); ++k) {
                table.add_row({cfg.system, p.mass, p.hbar, p.beta, omega_col, static_cast<std::int64_t>(k), energies[k],
                               ref[k], nan, energies[k] - ref[k], std::string(to_string(cfg.method)),
                               "energy:oracle;reference:derived"});
            }
        }
    }
    for (const auto& [level, points] : deviations) {
        if (points.size() < 2) continue;
        std::vector<double> b;
        std::vector<double> d;
        for (const auto& [beta, dev] : points) {
            b.push_back(beta);
            d.push_back(dev);
        }
        table.add_row({"summary", nan, nan, nan, nan, static_cast<std::int64_t>(level), nan, nan, nan,
                       loglog_slope(b, d), "beta-slope", "derived"});
    }
    return {render(table, base), kExitOk};
}

CommandOutput cmd_verify(const RunConfig& config, std::ostream& err) {
    const VerifyReport report = run_verify(config.strict, config.inject_fault);
    for (const auto& c : report.checks) {
        if (c.status != CheckStatus::Pass) {
            err << "gupqm: " << to_string(c.status) << ": " << c.module << "/" << c.name << ": " << c.detail << '\n';
        }
    }
    std::ostringstream os;
    if (config.resolved_format() == OutputFormat::Csv) {
        report.to_table().write_csv(os);
    } else {
        os << report.to_json().dump(2) << '\n';
    }
    return {os.str(), report.exit_status()};
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    CommandOutput result;
    try {
        if (config.command == "kernel") result = cmd_kernel(config, err);
        else if (config.command == "energy") result = cmd_energy(config, err);
        else if (config.command == "classical") result = cmd_classical(config, err);
        else if (config.command == "spectrum") result = cmd_spectrum(config, err);
        else if (config.command == "verify") result = cmd_verify(config, err);
        else throw InvalidArgument("unknown command '" + config.command + "'");
    } catch (const ConvergenceError& e) {
        err << "gupqm: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const Error& e) {
        err << "gupqm: " << e.what() << '\n';
        return kExitInvalid;
    }

    if (config.out.empty()) {
        out << result.text;
    } else {
        std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
        file << result.text;
        file.close();
        if (!file) {
            err << "gupqm: cannot write '" << config.out << "'\n";
            return kExitInvalid;
        }
    }
    return result.status;
}

}  // namespace gupqm::cli
