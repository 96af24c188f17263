#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "cli.hpp"
#include "gupqm/analytic_kernels.hpp"
#include "gupqm/classical.hpp"
#include "gupqm/errors.hpp"
#include "gupqm/numeric_propagator.hpp"
#include "gupqm/perturbation.hpp"

namespace gupqm::cli {

namespace {

/// Hard checks fail the run; soft ones (slope fits) only warn unless strict.
enum class Kind { Hard, Soft };

class Suite {
public:
    Suite(VerifyReport& report, std::string fault) : report_(report), fault_(std::move(fault)) {}

    bool faulty(const char* name) const { return fault_ == name; }

    /// Records value <= threshold.
    void below(const char* module, const char* name, double value, double threshold, Kind kind,
               std::string detail = {}) {
        const bool ok = std::isfinite(value) && value <= threshold;
        add(module, name, ok, value, threshold, kind, std::move(detail));
    }

    /// Records |value - target| <= tolerance; value reported, target in detail.
    void near(const char* module, const char* name, double value, double target, double tolerance, Kind kind) {
        std::ostringstream d;
        d.precision(17);
        d << "value " << value << ", target " << target << " +/- " << tolerance;
        const bool ok = std::isfinite(value) && std::abs(value - target) <= tolerance;
        add(module, name, ok, value, tolerance, kind, d.str());
    }

    void holds(const char* module, const char* name, bool ok, std::string detail) {
        add(module, name, ok, ok ? 1.0 : 0.0, 1.0, Kind::Hard, std::move(detail));
    }

    /// Runs body, turning a library exception into a failed check.
    void guarded(const char* module, const char* name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            add(module, name, false, std::nan(""), 0.0, Kind::Hard, std::string("exception: ") + e.what());
        }
    }

private:
    void add(const char* module, const char* name, bool ok, double value, double threshold, Kind kind,
             std::string detail) {
        CheckResult r;
        r.module = module;
        r.name = name;
        r.value = value;
        r.threshold = threshold;
        r.detail = std::move(detail);
        r.status = ok ? CheckStatus::Pass : (kind == Kind::Hard ? CheckStatus::Fail : CheckStatus::Warn);
        report_.checks.push_back(std::move(r));
    }

    VerifyReport& report_;
    std::string fault_;
};

double rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

double l2_norm(const Eigen::VectorXcd& v, double dq) { return std::sqrt(dq) * v.norm(); }

Eigen::VectorXcd wave_packet(const SpatialGrid& g) {
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double q = g.position(i);
        psi(static_cast<Eigen::Index>(i)) = std::exp(complex(-0.5 * (q - 1.0) * (q - 1.0), 0.5 * q));
    }
    return psi / l2_norm(psi, g.spacing());
}

void model_checks(Suite& s) {
    const auto nat = PhysicalParams::natural(0.02);
    bool rejected = false;
    try {
        (void)SpatialGrid::bounded(-10.0, 10.0, 64, nat);
    } catch (const BoundViolation&) {
        rejected = true;
    }
    bool accepted = true;
    try {
        (void)SpatialGrid::bounded(-20.0, 20.0, 16, nat);
    } catch (const BoundViolation&) {
        accepted = false;
    }
    s.holds("model", "grid_rejects_lattice_past_momentum_bound", rejected && accepted,
            "beta=0.02: L=20,n=64 rejected; L=40,n=16 accepted");

    const auto diags = validate(PhysicalParams::natural(0.2, 1.0));
    const bool warned = std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
        return d.code == "epsilon_ho" && d.severity == Severity::Warning;
    });
    s.holds("model", "epsilon_above_0.1_warns", warned, "beta m hbar omega = 0.2");
}

void analytic_checks(Suite& s) {
    const auto p = PhysicalParams::natural(1e-3);
    double worst = 0.0;
    for (double d : {0.0, 0.5, 1.0, 2.0}) {
        complex factor = fluctuation_factor(p, 0.0, d, 1.0);
        if (s.faulty("free-kernel")) factor *= 1.0 + 1e-3;
        const complex composed = factor * std::exp(complex(0.0, free_action(p, 0.0, d, 1.0).total()));
        worst = std::max(worst, rel(composed, free_kernel_gup(p, 0.0, d, 1.0)));
    }
    s.below("analytic_kernels", "free_kernel_factorization", worst, 1e-15, Kind::Hard,
            "kernel = fluctuation factor * exp(i S_c / hbar)");

    double free_limit = 0.0;
    double ho_limit = 0.0;
    const auto p0 = PhysicalParams::natural(0.0, 1.0);
    for (double d : {0.0, 0.5, 1.0, 2.0}) {
        free_limit = std::max(free_limit, rel(free_kernel_gup(p0, 0.0, d, 1.0), free_kernel_standard(p0, 0.0, d, 1.0)));
        ho_limit = std::max(ho_limit, rel(ho_kernel_gup(p0, 0.3, 0.3 + d, 1.0), mehler_kernel(p0, 0.3, 0.3 + d, 1.0)));
    }
    s.below("analytic_kernels", "beta0_free_kernel_is_standard", free_limit, 1e-6, Kind::Hard);
    s.below("analytic_kernels", "beta0_ho_kernel_is_mehler", ho_limit, 1e-6, Kind::Hard);

    const auto small = PhysicalParams::natural(0.0, 1e-3);
    const double s_ho = ho_action_beta0(small, 0.0, 1.0, 1.0);
    const double s_free = free_action(small, 0.0, 1.0, 1.0).s0;
    s.below("analytic_kernels", "omega0_ho_action_is_free_action", std::abs(s_ho - s_free) / std::abs(s_free), 1e-6,
            Kind::Hard, "omega T = 1e-3, q0 = 0, qf = 1 (series path)");

    const double s1_printed = ho_action_beta1_printed(small, 0.0, 1.0, 1.0).value;
    const double s1_free = free_action(small, 0.0, 1.0, 1.0).s1;
    s.below("analytic_kernels", "omega0_printed_beta1_action_is_free", std::abs(s1_printed - s1_free) / std::abs(s1_free),
            1e-5, Kind::Hard, "omega T = 1e-3, q0 = 0, qf = 1 (50-digit path)");

    double nc0 = 0.0;
    for (double d : {0.0, 0.5, 1.0, 2.0}) {
        nc0 = std::max(nc0, rel(nc_free_kernel(1.0, 1.0, 0.0, {0.0, 0.0}, {d, 0.0}, 1.0),
                                free_kernel_standard(p0, 0.0, d, 1.0)));
    }
    s.below("analytic_kernels", "theta0_nc_kernel_is_standard", nc0, 1e-12, Kind::Hard);
}

void classical_checks(Suite& s) {
    const std::vector<double> betas{1e-4, 1e-3, 1e-2};
    std::vector<double> residual;
    std::vector<double> legendre;
    for (double b : betas) {
        const auto p = PhysicalParams::natural(b, 1.0);
        const auto [path, c] = ho_trajectory(p, 0.0, 1.0, 1.0, 2049);
        residual.push_back(eom_residual(p, path));
        legendre.push_back(legendre_defect(p, 1.0));
    }
    if (s.faulty("eom-slope")) residual.back() *= 10.0;
    s.near("classical", "eom_residual_beta_slope", loglog_slope(betas, residual), 2.0, 0.1, Kind::Soft);
    s.near("classical", "legendre_defect_beta_slope", loglog_slope(betas, legendre), 2.0, 0.1, Kind::Soft);

    bool flips = true;
    for (double m : {1.0, 2.0}) {
        const auto p = PhysicalParams{m, 1.0, 0.02, 0.0, 0.0};
        const double vmax = velocity_bound(p).qdot_max;
        flips = flips && kinetic_factor_nonnegative(p, vmax * (1.0 - 1e-9), LagrangianOrder::Beta1) &&
                !kinetic_factor_nonnegative(p, vmax * (1.0 + 1e-9), LagrangianOrder::Beta1);
    }
    s.holds("classical", "kinetic_factor_flips_at_velocity_bound", flips, "beta = 0.02, m in {1, 2}");

    const auto p = PhysicalParams::natural(0.02);
    const double v = 0.3 * velocity_bound(p).qdot_max;
    s.below("classical", "momentum_velocity_round_trip",
            std::abs(velocity_from_momentum(p, canonical_momentum(p, v)) - v) / v, 1e-12, Kind::Hard);
}

void numeric_checks(Suite& s) {
    const auto pot = PotentialSpec::harmonic(1.0);
    const SpatialGrid g512 = SpatialGrid::centered(20.0, 512);

    s.below("numeric_propagator", "hamiltonian_hermiticity",
            build_hamiltonian(PhysicalParams::natural(1e-2, 1.0), g512, pot).hermiticity_defect(), 1e-12, Kind::Hard);

    const SpatialGrid g128 = SpatialGrid::centered(20.0, 128);
    const auto pu = PhysicalParams::natural(1e-3, 1.0);
    s.below("numeric_propagator", "momentum_split_unitarity",
            compose_kernel(pu, g128, TimeSlicing::create(1.0, 16, SliceScheme::MomentumSplit), pot).unitarity_defect(),
            1e-8, Kind::Hard);

    const auto p0 = PhysicalParams::natural(0.0);
    const auto free = PotentialSpec::free();
    const auto half = compose_kernel(p0, g128, TimeSlicing::create(0.5, 4, SliceScheme::MomentumSplit), free);
    const auto whole = compose_kernel(p0, g128, TimeSlicing::create(1.0, 8, SliceScheme::MomentumSplit), free);
    const Eigen::MatrixXcd diff = compose(half, half).entries() - whole.entries();
    s.below("numeric_propagator", "semigroup_beta0", diff.cwiseAbs().maxCoeff() / whole.entries().cwiseAbs().maxCoeff(),
            1e-6, Kind::Hard);

    double formula_dev = 0.0;
    double imag_dev = 0.0;
    for (double b : {0.0, 1e-3, 1e-2}) {
        const auto p = PhysicalParams::natural(b, 1.0);
        double formula = ground_state_energy_formula(p);
        if (s.faulty("ground-state")) formula += 1e-3;
        const double diag = ground_state_energy_numeric(p, g512, pot, SpectrumMethod::Diagonalization).energy;
        const double imag = ground_state_energy_numeric(p, g512, pot, SpectrumMethod::ImaginaryTime).energy;
        formula_dev = std::max(formula_dev, std::abs(diag - formula) / std::max(1e-4, 20.0 * b * b));
        imag_dev = std::max(imag_dev, std::abs(imag - diag) / std::abs(diag));
    }
    s.below("numeric_propagator", "ground_state_matches_formula", formula_dev, 1.0, Kind::Hard,
            "|E0 - formula| / max(1e-4, 20 beta^2), beta in {0, 1e-3, 1e-2}, L=20, n=512");
    s.below("numeric_propagator", "imaginary_time_matches_diagonalization", imag_dev, 1e-4, Kind::Hard);

    const SpatialGrid g256 = SpatialGrid::centered(20.0, 256);
    double previous = -1.0;
    bool monotone = true;
    for (double b : {0.0, 2.5e-3, 5e-3, 1e-2}) {
        const double e = ground_state_energy_numeric(PhysicalParams::natural(b, 1.0), g256, pot,
                                                     SpectrumMethod::Diagonalization)
                             .energy;
        monotone = monotone && e > previous;
        previous = e;
    }
    s.holds("numeric_propagator", "ground_state_increases_with_beta", monotone, "beta in {0, 2.5e-3, 5e-3, 1e-2}");

    const auto pr = PhysicalParams::natural(1e-2, 1.0);
    const double e512 = ground_state_energy_numeric(pr, g512, pot, SpectrumMethod::Diagonalization).energy;
    const double e1024 =
        ground_state_energy_numeric(pr, SpatialGrid::centered(20.0, 1024), pot, SpectrumMethod::Diagonalization).energy;
    s.below("numeric_propagator", "grid_refinement_stability", std::abs(e1024 - e512), 1e-5, Kind::Hard,
            "n = 512 vs 1024 at L = 20, beta = 1e-2");

    // Convergence orders against the exact lattice propagator, beta = 0 oscillator.
    const auto ph = PhysicalParams::natural(0.0, 1.0);
    const Eigen::VectorXcd psi = wave_packet(g512);
    const Eigen::VectorXcd exact = exact_propagator(ph, g512, 1.0, pot).apply(psi);
    std::vector<double> taus;
    std::vector<double> short_err;
    std::vector<double> split_err;
    for (std::size_t n : {8, 16, 32}) {
        taus.push_back(1.0 / static_cast<double>(n));
        const auto st = compose_kernel(ph, g512, TimeSlicing::create(1.0, n, SliceScheme::ShortTimeKernel), pot);
        const auto ms = compose_kernel(ph, g512, TimeSlicing::create(1.0, n, SliceScheme::MomentumSplit), pot);
        short_err.push_back(l2_norm(st.apply(psi) - exact, g512.spacing()));
        split_err.push_back(l2_norm(ms.apply(psi) - exact, g512.spacing()));
    }
    s.near("numeric_propagator", "short_time_composition_order", loglog_slope(taus, short_err), 1.0, 0.2, Kind::Soft);
    s.near("numeric_propagator", "strang_split_order", loglog_slope(taus, split_err), 2.0, 0.2, Kind::Soft);
}

void perturbation_checks(Suite& s) {
    const auto p = PhysicalParams::natural(1e-2, 1.0);
    const OscillatorBasis basis = OscillatorBasis::create(32, p);

    double p4 = p4_matrix_element(basis, 0, 0);
    if (s.faulty("p4")) p4 *= 1.0 + 1e-6;
    s.below("perturbation", "p4_ground_element", std::abs(p4 - 0.75) / 0.75, 1e-12, Kind::Hard, "<0|p^4|0> = 3 (m hbar omega / 2)^2");

    const double target = 0.75 * p.beta;
    const H1GroundTerms t = h1_ground_terms(basis, p);
    s.below("perturbation", "h1_ground_expectation", std::abs(t.h1 - target) / target, 1e-12, Kind::Hard,
            "<0|H1|0> = (3/4) beta m omega^2 hbar^2");
    s.below("perturbation", "first_order_matches_formula",
            std::abs(first_order_correction(basis, p, 0) - (ground_state_energy_formula(p) - 0.5)) / target, 1e-12,
            Kind::Hard);
    s.below("perturbation", "h1_decomposition", h1_decomposition_check(basis, p), 1e-10, Kind::Hard);
    s.below("perturbation", "ladder_commutator", basis.commutator_defect(), 1e-12, Kind::Hard);

    double forbidden = 0.0;
    for (std::size_t n = 0; n <= basis.safe_band(); ++n) {
        for (std::size_t k = 0; k <= basis.safe_band(); ++k) {
            const std::size_t gap = n > k ? n - k : k - n;
            if (gap != 0 && gap != 2 && gap != 4) forbidden = std::max(forbidden, std::abs(p4_matrix_element(basis, n, k)));
        }
    }
    s.below("perturbation", "p4_selection_rule", forbidden, 1e-12, Kind::Hard);

    const SpatialGrid g256 = SpatialGrid::centered(20.0, 256);
    const std::vector<double> betas{1e-3, 3e-3, 1e-2};
    for (std::size_t level = 0; level < 3; ++level) {
        std::vector<double> dev;
        for (double b : betas) {
            const auto pb = PhysicalParams::natural(b, 1.0);
            const double e = excited_levels(pb, g256, PotentialSpec::harmonic(1.0), 3).eigenvalues[level];
            dev.push_back(e - (static_cast<double>(level) + 0.5) - first_order_correction(basis, pb, level));
        }
        const char* names[] = {"level0_second_order_slope", "level1_second_order_slope", "level2_second_order_slope"};
        s.near("perturbation", names[level], loglog_slope(betas, dev), 2.0, 0.1, Kind::Soft);
    }
}

void findings(VerifyReport& report) {
    {
        const double c = legendre_beta2_coefficient(PhysicalParams::natural(), 1.0);
        Finding f;
        f.name = "beta2_lagrangian_sign";
        Json d = Json::object();
        d["legendre_coefficient"] = c;
        d["printed_coefficient"] = -15.0;
        d["sign_conflict"] = c * -15.0 < 0.0;
        f.data = d;
        std::ostringstream msg;
        msg << "Legendre transform of p^2/2m + beta p^4/m + beta^2 p^6/2m gives beta^2 coefficient "
            << std::lround(c) << " m^4 qdot^4 inside the kinetic bracket; the printed Lagrangian has -15";
        f.summary = msg.str();
        report.findings.push_back(std::move(f));
    }
    {
        const auto p = PhysicalParams::natural(0.0, 1.0);
        Json cases = Json::array();
        bool agree = true;
        for (const auto& [q0, qf, T] : {std::tuple{0.0, 1.0, kPi / 2.0}, std::tuple{0.0, 1.0, 1.0},
                                        std::tuple{0.5, 1.0, 1.0}}) {
            const double printed = ho_action_beta1_printed(p, q0, qf, T).value;
            const double quad = ho_action_beta1_quadrature(p, q0, qf, T).value;
            Json c = Json::object();
            c["q0"] = q0;
            c["qf"] = qf;
            c["T"] = T;
            c["printed"] = printed;
            c["quadrature"] = quad;
            c["relative_difference"] = std::abs(printed - quad) / std::abs(quad);
            agree = agree && std::abs(printed - quad) <= 1e-6 * std::abs(quad);
            cases.push_back(c);
        }
        Finding f;
        f.name = "ho_beta1_action_printed_vs_quadrature";
        Json d = Json::object();
        d["mass"] = 1.0;
        d["hbar"] = 1.0;
        d["omega"] = 1.0;
        d["authoritative"] = "quadrature";
        d["agree"] = agree;
        d["cases"] = cases;
        f.data = d;
        f.summary = agree ? "printed O(beta) oscillator action agrees with the quadrature oracle"
                          : "printed O(beta) oscillator action disagrees with the quadrature oracle; quadrature is "
                            "authoritative";
        report.findings.push_back(std::move(f));
    }
    {
        const NcTermMap map = nc_term_map(PhysicalParams::natural(1e-3), 1.0, 1.0);
        Json m = Json::object();
        m["beta"] = 1e-3;
        m["displacement"] = 1.0;
        m["T"] = 1.0;
        m["gup_phase_term_imag"] = map.gup_phase_term.imag();
        m["gup_displacement_term"] = map.gup_displacement_term;
        m["theta_from_phase"] = map.theta_from_phase;
        m["theta_from_displacement"] = map.theta_from_displacement;
        m["single_theta_maps_both"] = map.single_theta_maps_both;
        report.nc_term_map = m;

        Finding f;
        f.name = "nc_theta_identification";
        f.data = m;
        f.summary = map.single_theta_maps_both
                        ? "one theta maps both GUP bracket terms onto the NC bracket"
                        : "the phase term needs theta = 6 beta hbar^2, the displacement term theta = 12 beta hbar^2";
        report.findings.push_back(std::move(f));
    }
    {
        const std::vector<double> thetas{1e-4, 1e-3, 1e-2};
        Json slopes = Json::object();
        for (double r : {0.0, 1.0}) {
            std::vector<double> defect;
            for (double th : thetas) {
                const complex exact = nc_free_kernel(1.0, 1.0, th, {0.0, 0.0}, {r, 0.0}, 1.0);
                defect.push_back(std::abs(nc_free_kernel_expanded(1.0, 1.0, th, {0.0, 0.0}, {r, 0.0}, 1.0) - exact) /
                                 std::abs(exact));
            }
            slopes[r == 0.0 ? "r=0" : "r=1"] = loglog_slope(thetas, defect);
        }
        Finding f;
        f.name = "nc_expansion_order";
        f.data = slopes;
        f.summary = "expanded NC kernel defect scales as theta^2 only at coincident endpoints; displaced endpoints "
                    "scale as theta^1";
        report.findings.push_back(std::move(f));
    }
}

}  // namespace

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Warn: return "warn";
        case CheckStatus::Fail: return "fail";
    }
    return "unknown";
}

std::size_t VerifyReport::count(CheckStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; }));
}

int VerifyReport::exit_status() const {
    if (count(CheckStatus::Fail) > 0) return kExitInvariant;
    if (strict && count(CheckStatus::Warn) > 0) return kExitInvariant;
    return kExitOk;
}

Json VerifyReport::to_json() const {
    Json doc = Json::object();
    doc["command"] = "verify";
    doc["strict"] = strict;
    doc["inject_fault"] = fault.empty() ? Json(nullptr) : Json(fault);
    Json summary = Json::object();
    summary["checks"] = checks.size();
    summary["passed"] = count(CheckStatus::Pass);
    summary["warnings"] = count(CheckStatus::Warn);
    summary["failed"] = count(CheckStatus::Fail);
    summary["findings"] = findings.size();
    summary["exit_status"] = exit_status();
    doc["summary"] = summary;
    Json cs = Json::array();
    for (const auto& c : checks) {
        Json j = Json::object();
        j["module"] = c.module;
        j["name"] = c.name;
        j["status"] = std::string(to_string(c.status));
        j["value"] = json_number(c.value);
        j["threshold"] = c.threshold;
        j["detail"] = c.detail;
        j["provenance"] = "oracle";
        cs.push_back(j);
    }
    doc["checks"] = cs;
    Json fs = Json::array();
    for (const auto& f : findings) {
        Json j = Json::object();
        j["name"] = f.name;
        j["summary"] = f.summary;
        j["data"] = f.data;
        j["provenance"] = "printed-formula vs oracle";
        fs.push_back(j);
    }
    doc["findings"] = fs;
    doc["nc_term_map"] = nc_term_map;
    return doc;
}

Table VerifyReport::to_table() const {
    Table t({"kind", "module", "name", "status", "value", "threshold", "detail", "provenance"});
    const auto clean = [](std::string s) {
        std::replace(s.begin(), s.end(), ',', ';');
        return s;
    };
    for (const auto& c : checks) {
        t.add_row({"check", c.module, c.name, std::string(to_string(c.status)), c.value, c.threshold, clean(c.detail),
                   "oracle"});
    }
    for (const auto& f : findings) {
        t.add_row({"finding", "verify", f.name, "finding", std::nan(""), std::nan(""), clean(f.summary),
                   "printed-formula vs oracle"});
    }
    return t;
}

const std::vector<std::string>& known_faults() {
    static const std::vector<std::string> faults{"free-kernel", "ground-state", "p4", "eom-slope"};
    return faults;
}

VerifyReport run_verify(bool strict, const std::string& fault) {
    if (!fault.empty() && std::find(known_faults().begin(), known_faults().end(), fault) == known_faults().end()) {
        std::string names;
        for (const auto& f : known_faults()) names += (names.empty() ? "" : ", ") + f;
        throw InvalidArgument("unknown fault '" + fault + "' (known: " + names + ")");
    }
    VerifyReport report;
    report.strict = strict;
    report.fault = fault;
    Suite s(report, fault);
    s.guarded("model", "suite", [&] { model_checks(s); });
    s.guarded("analytic_kernels", "suite", [&] { analytic_checks(s); });
    s.guarded("classical", "suite", [&] { classical_checks(s); });
    s.guarded("numeric_propagator", "suite", [&] { numeric_checks(s); });
    s.guarded("perturbation", "suite", [&] { perturbation_checks(s); });
    findings(report);
    return report;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs >= 2 matching points");
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gupqm::cli
