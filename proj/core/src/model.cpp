#include "gupqm/model.hpp"

#include <cmath>
#include <sstream>

#include "gupqm/errors.hpp"

namespace gupqm {

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Info: return "info";
    }
    return "unknown";
}

std::string_view to_string(SliceScheme s) {
    switch (s) {
        case SliceScheme::ShortTimeKernel: return "short-time";
        case SliceScheme::MomentumSplit: return "momentum-split";
    }
    return "unknown";
}

std::string_view to_string(KernelScheme s) {
    switch (s) {
        case KernelScheme::ShortTimeKernel: return "short-time";
        case KernelScheme::MomentumSplit: return "momentum-split";
        case KernelScheme::Exact: return "exact";
    }
    return "unknown";
}

std::string_view to_string(SpectrumMethod m) {
    switch (m) {
        case SpectrumMethod::Diagonalization: return "diagonalize";
        case SpectrumMethod::ImaginaryTime: return "imaginary-time";
    }
    return "unknown";
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::PrintedFormula: return "printed-formula";
        case Provenance::Oracle: return "oracle";
        case Provenance::Derived: return "derived";
    }
    return "unknown";
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) return true;
    }
    return false;
}

void throw_if_errors(const std::vector<Diagnostic>& diags, std::string_view context) {
    std::ostringstream msg;
    bool any = false;
    for (const auto& d : diags) {
        if (d.severity != Severity::Error) continue;
        msg << (any ? "; " : "") << d.code << ": " << d.message;
        any = true;
    }
    if (any) throw InvalidArgument(std::string(context) + ": " + msg.str());
}

namespace {

void check_positive(std::vector<Diagnostic>& out, double v, const char* code, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        out.push_back({Severity::Error, code, std::string(what) + " must be finite and > 0", v});
    }
}

void check_nonnegative(std::vector<Diagnostic>& out, double v, const char* code, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        out.push_back({Severity::Error, code, std::string(what) + " must be finite and >= 0", v});
    }
}

}  // namespace

std::vector<Diagnostic> validate(const PhysicalParams& params) {
    std::vector<Diagnostic> out;
    check_positive(out, params.mass, "mass", "mass");
    check_positive(out, params.hbar, "hbar", "hbar");
    check_nonnegative(out, params.beta, "beta", "beta");
    check_nonnegative(out, params.omega, "omega", "omega");
    check_nonnegative(out, params.theta, "theta", "theta");
    if (has_errors(out)) return out;

    const double eps_ho = params.epsilon_ho();
    if (params.omega > 0.0) {
        out.push_back({eps_ho > kEpsilonWarn ? Severity::Warning : Severity::Info, "epsilon_ho",
                       "beta m hbar omega", eps_ho});
    }
    return out;
}

void require_valid(const PhysicalParams& params) {
    throw_if_errors(validate(params), "invalid physical parameters");
}

SpatialGrid SpatialGrid::create(double q_min, double q_max, std::size_t n_points) {
    if (!std::isfinite(q_min) || !std::isfinite(q_max) || !(q_max > q_min)) {
        throw InvalidArgument("grid: need finite q_min < q_max");
    }
    if (n_points < 16) throw InvalidArgument("grid: n_points must be >= 16");
    if (n_points % 2 != 0) throw InvalidArgument("grid: n_points must be even");
    return SpatialGrid(q_min, q_max, n_points);
}

SpatialGrid SpatialGrid::bounded(double q_min, double q_max, std::size_t n_points,
                                 const PhysicalParams& params, double safety) {
    SpatialGrid grid = create(q_min, q_max, n_points);
    require_valid(params);
    if (!(safety > 0.0)) throw InvalidArgument("grid: bound safety factor must be > 0");
    if (params.beta > 0.0) {
        const double limit = safety / std::sqrt(2.0 * params.beta);
        const double pmax = grid.max_momentum(params.hbar);
        if (!(pmax < limit)) {
            std::ostringstream msg;
            msg << "grid: max|p_k| = " << pmax << " reaches " << safety
                << "/sqrt(2 beta) = " << limit;
            throw BoundViolation(msg.str());
        }
    }
    return grid;
}

Eigen::VectorXd SpatialGrid::positions() const {
    Eigen::VectorXd q(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) q[static_cast<Eigen::Index>(i)] = position(i);
    return q;
}

long long SpatialGrid::signed_index(std::size_t j) const {
    const auto jj = static_cast<long long>(j);
    const auto n = static_cast<long long>(n_);
    return jj < n / 2 ? jj : jj - n;
}

double SpatialGrid::wavenumber(std::size_t j) const {
    return 2.0 * kPi * static_cast<double>(signed_index(j)) / length();
}

Eigen::VectorXd SpatialGrid::momenta(double hbar) const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(n_));
    for (std::size_t j = 0; j < n_; ++j) p[static_cast<Eigen::Index>(j)] = momentum(j, hbar);
    return p;
}

double SpatialGrid::max_momentum(double hbar) const {
    return kPi * hbar * static_cast<double>(n_) / length();
}

std::size_t SpatialGrid::index_of(double q) const {
    const double x = std::round((q - q_min_) / spacing());
    if (x < 0.0 || x >= static_cast<double>(n_)) throw InvalidArgument("grid: position outside box");
    return static_cast<std::size_t>(x);
}

double SpatialGrid::periodic_delta(double a, double b) const {
    const double L = length();
    double d = std::fmod(a - b, L);
    if (d >= 0.5 * L) d -= L;
    if (d < -0.5 * L) d += L;
    return d;
}

std::vector<Diagnostic> validate(const PhysicalParams& params, const SpatialGrid& grid,
                                 double safety, double v_char) {
    std::vector<Diagnostic> out = validate(params);
    if (has_errors(out)) return out;

    if (params.beta > 0.0) {
        const double qdot_max = 1.0 / std::sqrt(2.0 * params.beta * params.mass * params.mass);
        out.push_back({Severity::Info, "velocity_bound", "qdot_max = 1/sqrt(2 beta m^2)", qdot_max});
        const double limit = safety / std::sqrt(2.0 * params.beta);
        const double pmax = grid.max_momentum(params.hbar);
        if (!(pmax < limit)) {
            std::ostringstream msg;
            msg << "max|p_k| = " << pmax << " not below " << safety << "/sqrt(2 beta) = " << limit;
            out.push_back({Severity::Error, "momentum_bound", msg.str(), pmax});
        }
    }
    if (v_char > 0.0) {
        const double eps = params.epsilon_free(v_char);
        out.push_back({eps > kEpsilonWarn ? Severity::Warning : Severity::Info, "epsilon_free",
                       "beta m^2 v_char^2", eps});
    }
    return out;
}

TimeSlicing TimeSlicing::create(double total, std::size_t n_slices, SliceScheme scheme) {
    if (!(total > 0.0) || !std::isfinite(total)) throw InvalidArgument("slicing: T must be > 0");
    if (n_slices < 1) throw InvalidArgument("slicing: n_slices must be >= 1");
    return TimeSlicing(total, n_slices, scheme);
}

KernelMatrix::KernelMatrix(Eigen::MatrixXcd entries, SpatialGrid grid, double time,
                           PhysicalParams params, KernelScheme scheme)
    : entries_(std::move(entries)), grid_(grid), time_(time), params_(params), scheme_(scheme) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (entries_.rows() != n || entries_.cols() != n) {
        throw InvalidArgument("kernel: matrix dimension must equal grid size");
    }
}

Eigen::VectorXcd KernelMatrix::apply(const Eigen::VectorXcd& psi) const {
    if (psi.size() != entries_.cols()) throw InvalidArgument("kernel: state size mismatch");
    return grid_.spacing() * (entries_ * psi);
}

double KernelMatrix::unitarity_defect() const {
    const double dq = grid_.spacing();
    Eigen::MatrixXcd g = dq * dq * (entries_.adjoint() * entries_);
    g -= Eigen::MatrixXcd::Identity(g.rows(), g.cols());
    return g.cwiseAbs().maxCoeff();
}

}  // namespace gupqm
