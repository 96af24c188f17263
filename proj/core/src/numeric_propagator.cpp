#include "gupqm/numeric_propagator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gupqm/analytic_kernels.hpp"
#include "gupqm/errors.hpp"
#include "lattice.hpp"

namespace gupqm {

namespace {

constexpr complex kI{0.0, 1.0};

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

/// c(d) and c(n - d) agree for an even symbol; average away the rounding.
template <typename Vec>
void symmetrize_column(Vec& c) {
    const Eigen::Index n = c.size();
    for (Eigen::Index d = 1; d < n / 2; ++d) {
        const auto avg = 0.5 * (c(d) + c(n - d));
        c(d) = avg;
        c(n - d) = avg;
    }
}

double potential_range(const Eigen::VectorXd& v) { return v.maxCoeff() - v.minCoeff(); }

}  // namespace

std::string_view to_string(KineticOrder k) {
    switch (k) {
        case KineticOrder::Beta0: return "beta0";
        case KineticOrder::Beta1: return "beta1";
        case KineticOrder::Beta2: return "beta2";
    }
    return "unknown";
}

Eigen::VectorXd kinetic_dispersion(const PhysicalParams& params, const SpatialGrid& grid,
                                   KineticOrder order) {
    const double m = params.mass;
    const double b = params.beta;
    Eigen::VectorXd e(idx(grid.size()));
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double p = grid.momentum(j, params.hbar);
        const double p2 = p * p;
        double value = p2 / (2.0 * m);
        if (order != KineticOrder::Beta0) value += b * p2 * p2 / m;
        if (order == KineticOrder::Beta2) value += b * b * p2 * p2 * p2 / (2.0 * m);
        e(idx(j)) = value;
    }
    return e;
}

double smooth_taper(double x, double flat, double cutoff) {
    if (x <= flat) return 1.0;
    if (x >= cutoff) return 0.0;
    const double t = (x - flat) / (cutoff - flat);
    const auto s = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
    const double a = s(1.0 - t);
    return a / (a + s(t));
}

HamiltonianOperator::HamiltonianOperator(Eigen::MatrixXd matrix, Eigen::VectorXd dispersion,
                                         Eigen::VectorXd potential, SpatialGrid grid,
                                         PhysicalParams params, KineticOrder order)
    : matrix_(std::move(matrix)),
      dispersion_(std::move(dispersion)),
      potential_(std::move(potential)),
      grid_(grid),
      params_(params),
      order_(order) {}

double HamiltonianOperator::hermiticity_defect() const {
    const double scale = matrix_.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() / scale;
}

HamiltonianOperator build_hamiltonian(const PhysicalParams& params, const SpatialGrid& grid,
                                      const PotentialSpec& pot, KineticOrder order) {
    require_valid(params);
    Eigen::VectorXd disp = kinetic_dispersion(params, grid, order);
    Eigen::VectorXd column = detail::circulant_column(disp.cast<complex>()).real();
    symmetrize_column(column);
    Eigen::MatrixXd h = detail::circulant_matrix(column);
    Eigen::VectorXd v = pot.on_grid(grid, params.mass);
    h.diagonal() += v;
    return HamiltonianOperator(std::move(h), std::move(disp), std::move(v), grid, params, order);
}

KernelMatrix short_time_kernel(const PhysicalParams& params, const SpatialGrid& grid, double tau,
                               const PotentialSpec& pot, const ShortTimeOptions& options) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("short-time kernel: tau must be > 0");
    require_valid(params);
    const double m = params.mass;
    const double hb = params.hbar;
    const double b = params.beta;
    const double dq = grid.spacing();

    double flat = 0.0;
    double cut = 0.0;
    if (options.window) {
        if (!(options.flat_fraction > 0.0) || !(options.cutoff_fraction > options.flat_fraction)) {
            throw InvalidArgument("short-time kernel: need 0 < flat_fraction < cutoff_fraction");
        }
        const double v_res = kPi * hb / (m * dq);
        cut = options.cutoff_fraction * v_res * tau;
        if (b > 0.0) cut = std::min(cut, options.velocity_safety * velocity_bound(params).qdot_max * tau);
        cut = std::min(cut, 0.45 * grid.length());
        flat = cut * options.flat_fraction / options.cutoff_fraction;
        if (flat < 16.0 * dq) {
            std::ostringstream msg;
            msg << "short-time kernel: resolution window flat zone " << flat << " spans fewer than 16 "
                << "lattice spacings (dq = " << dq << ")";
            throw MeshTooCoarse(msg.str());
        }
    }

    const complex pre = free_prefactor(params, tau);
    const Eigen::VectorXd v = pot.on_grid(grid, m);
    const std::size_t n = grid.size();
    Eigen::MatrixXcd k(idx(n), idx(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double qj = grid.position(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = grid.periodic_delta(grid.position(i), qj);
            const double w = options.window ? smooth_taper(std::abs(d), flat, cut) : 1.0;
            if (w == 0.0) {
                k(idx(i), idx(j)) = 0.0;
                continue;
            }
            const double d2 = d * d;
            const complex bracket(1.0 - 6.0 * b * m * m * d2 / (tau * tau), 3.0 * b * hb * m / tau);
            const double phase = m * d2 / (2.0 * hb * tau) - tau * v(idx(j)) / hb -
                                 b * m * m * m * d2 * d2 / (hb * tau * tau * tau);
            k(idx(i), idx(j)) = w * pre * bracket * std::exp(kI * phase);
        }
    }
    return KernelMatrix(std::move(k), grid, tau, params, KernelScheme::ShortTimeKernel);
}

std::vector<Diagnostic> short_time_diagnostics(const PhysicalParams& params, const SpatialGrid& grid,
                                               double tau, const PotentialSpec& pot) {
    std::vector<Diagnostic> out;
    if (!(tau > 0.0)) {
        out.push_back({Severity::Error, "tau", "tau must be > 0", tau});
        return out;
    }
    const Eigen::VectorXd v = pot.on_grid(grid, params.mass);
    const double tv = tau * v.cwiseAbs().maxCoeff() / params.hbar;
    if (tv >= 0.1) {
        out.push_back({Severity::Warning, "tau_vmax", "tau V_max / hbar >= 0.1", tv});
    }
    const double res = params.mass * grid.spacing() * grid.spacing() / (params.hbar * tau);
    if (res >= 1.0) {
        out.push_back({Severity::Warning, "resolution", "m dq^2 / (hbar tau) >= 1", res});
    }
    return out;
}

KernelMatrix split_step_kernel(const PhysicalParams& params, const SpatialGrid& grid, double tau,
                               const PotentialSpec& pot, KineticOrder order) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("split step: tau must be > 0");
    require_valid(params);
    const double hb = params.hbar;
    const Eigen::VectorXd disp = kinetic_dispersion(params, grid, order);
    Eigen::VectorXcd symbol(disp.size());
    for (Eigen::Index k = 0; k < disp.size(); ++k) symbol(k) = std::exp(-kI * (disp(k) * tau / hb));
    Eigen::VectorXcd column = detail::circulant_column(symbol);
    symmetrize_column(column);
    Eigen::MatrixXcd u = detail::circulant_matrix(column);

    const Eigen::VectorXd v = pot.on_grid(grid, params.mass);
    Eigen::VectorXcd half(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) half(i) = std::exp(-kI * (0.5 * v(i) * tau / hb));
    u = half.asDiagonal() * u * half.asDiagonal();
    u /= grid.spacing();
    return KernelMatrix(std::move(u), grid, tau, params, KernelScheme::MomentumSplit);
}

KernelMatrix compose_kernel(const PhysicalParams& params, const SpatialGrid& grid,
                            const TimeSlicing& slicing, const PotentialSpec& pot,
                            const ShortTimeOptions& options) {
    const double dq = grid.spacing();
    const std::size_t n = slicing.slices();
    KernelMatrix one = [&] {
        if (slicing.scheme() == SliceScheme::ShortTimeKernel) {
            if (n < 2) throw InvalidArgument("compose: short-time scheme needs n_slices >= 2");
            return short_time_kernel(params, grid, slicing.tau(), pot, options);
        }
        return split_step_kernel(params, grid, slicing.tau(), pot, KineticOrder::Beta1);
    }();
    Eigen::MatrixXcd u = detail::matrix_power(dq * one.entries(), n);
    u /= dq;
    return KernelMatrix(std::move(u), grid, slicing.total(), params, one.scheme());
}

KernelMatrix compose(const KernelMatrix& later, const KernelMatrix& earlier) {
    if (!(later.grid() == earlier.grid())) throw InvalidArgument("compose: kernels live on different grids");
    Eigen::MatrixXcd k;
    k.noalias() = later.entries() * earlier.entries();
    k *= later.grid().spacing();
    return KernelMatrix(std::move(k), later.grid(), later.time() + earlier.time(), later.params(),
                        later.scheme());
}

KernelMatrix exact_propagator(const PhysicalParams& params, const SpatialGrid& grid, double T,
                              const PotentialSpec& pot, KineticOrder order) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("exact propagator: T must be > 0");
    const HamiltonianOperator h = build_hamiltonian(params, grid, pot, order);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw ConvergenceError("exact propagator: eigensolver failed");
    const Eigen::VectorXd& e = solver.eigenvalues();
    Eigen::VectorXcd phase(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) phase(k) = std::exp(-kI * (e(k) * T / params.hbar));
    const Eigen::MatrixXcd vecs = solver.eigenvectors().cast<complex>();
    Eigen::MatrixXcd u;
    u.noalias() = vecs * phase.asDiagonal() * vecs.transpose();
    u /= grid.spacing();
    return KernelMatrix(std::move(u), grid, T, params, KernelScheme::Exact);
}

std::vector<complex> interpolate_kernel(const KernelMatrix& kernel, std::size_t source,
                                        const std::vector<double>& deltas,
                                        const MomentumWindow& window) {
    const SpatialGrid& grid = kernel.grid();
    const std::size_t n = grid.size();
    if (source >= n) throw InvalidArgument("interpolate: source index outside grid");
    if (!(window.cutoff_fraction > window.flat_fraction) || window.flat_fraction < 0.0) {
        throw InvalidArgument("interpolate: need 0 <= flat_fraction < cutoff_fraction");
    }
    Eigen::VectorXcd col(idx(n));
    for (std::size_t m = 0; m < n; ++m) col(idx(m)) = kernel((source + m) % n, source);
    Eigen::VectorXcd coeff = detail::fft(col);

    const double pmax = grid.max_momentum(1.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double p = std::abs(grid.wavenumber(k));
        coeff(idx(k)) *= smooth_taper(p, window.flat_fraction * pmax, window.cutoff_fraction * pmax) /
                         static_cast<double>(n);
    }

    std::vector<complex> out;
    out.reserve(deltas.size());
    for (double delta : deltas) {
        complex sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (coeff(idx(k)) == 0.0) continue;
            sum += coeff(idx(k)) * std::exp(kI * (grid.wavenumber(k) * delta));
        }
        out.push_back(sum);
    }
    return out;
}

complex interpolate_kernel(const KernelMatrix& kernel, std::size_t source, double delta,
                           const MomentumWindow& window) {
    return interpolate_kernel(kernel, source, std::vector<double>{delta}, window).front();
}

EnergySpectrum excited_levels(const PhysicalParams& params, const SpatialGrid& grid,
                              const PotentialSpec& pot, std::size_t k, KineticOrder order) {
    if (k < 1 || k >= grid.size() / 4) {
        std::ostringstream msg;
        msg << "excited_levels: need 1 <= k < n/4 = " << grid.size() / 4 << ", got " << k;
        throw InvalidArgument(msg.str());
    }
    const HamiltonianOperator h = build_hamiltonian(params, grid, pot, order);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("excited_levels: eigensolver failed");
    EnergySpectrum out{{}, SpectrumMethod::Diagonalization, grid};
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
    return out;
}

double characteristic_energy(const PhysicalParams& params, const SpatialGrid& grid,
                             const PotentialSpec& pot) {
    if (pot.kind() == PotentialSpec::Kind::Harmonic) return params.hbar * pot.omega();
    const double range = potential_range(pot.on_grid(grid, params.mass));
    if (range > 0.0) return range;
    const double p = 0.1 * grid.max_momentum(params.hbar);
    return p * p / (2.0 * params.mass);
}

namespace {

void normalize_and_fix_sign(Eigen::VectorXd& psi, double dq) {
    psi /= std::sqrt(dq * psi.squaredNorm());
    if (psi.sum() < 0.0) psi = -psi;
}

GroundState ground_state_diagonalize(const PhysicalParams& params, const SpatialGrid& grid,
                                     const PotentialSpec& pot, KineticOrder order) {
    const HamiltonianOperator h = build_hamiltonian(params, grid, pot, order);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw ConvergenceError("ground state: eigensolver failed");
    GroundState out;
    out.energy = solver.eigenvalues()(0);
    out.wavefunction = solver.eigenvectors().col(0);
    normalize_and_fix_sign(out.wavefunction, grid.spacing());
    out.method = SpectrumMethod::Diagonalization;
    return out;
}

GroundState ground_state_imaginary_time(const PhysicalParams& params, const SpatialGrid& grid,
                                        const PotentialSpec& pot, const ImaginaryTimeOptions& opt,
                                        KineticOrder order) {
    require_valid(params);
    const Eigen::VectorXd v = pot.on_grid(grid, params.mass);
    const double range = potential_range(v);
    const double edge = std::max(v(0), v(v.size() - 1)) - v.minCoeff();
    if (!(range > 0.0) || edge < 0.9 * range) {
        throw InvalidArgument("imaginary time: potential must be confining (largest at the box edges)");
    }
    if (opt.block < 1) throw InvalidArgument("imaginary time: block must be >= 1");

    const double hb = params.hbar;
    const double e_char = characteristic_energy(params, grid, pot);
    const double d = opt.step > 0.0 ? opt.step : 1e-3 * hb / e_char;

    const Eigen::VectorXd disp = kinetic_dispersion(params, grid, order);
    const Eigen::VectorXd kin = (-disp * d / hb).array().exp();
    const Eigen::VectorXd half = (-0.5 * v * d / hb).array().exp();

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXcd psi(v.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = dist(rng);
    psi /= psi.norm();

    double log_sum = 0.0;
    double previous = 0.0;
    bool have_previous = false;
    for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
        psi = half.cwiseProduct(psi);
        Eigen::VectorXcd spec = detail::fft(psi);
        spec = kin.cwiseProduct(spec);
        psi = detail::ifft(spec);
        psi = half.cwiseProduct(psi);
        const double norm = psi.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) throw ConvergenceError("imaginary time: state vanished");
        log_sum += std::log(norm);
        psi /= norm;

        if (it % opt.block != 0) continue;
        const double energy = -hb * log_sum / (static_cast<double>(opt.block) * d);
        log_sum = 0.0;
        const double scale = std::max(std::abs(energy), e_char);
        if (have_previous && std::abs(energy - previous) < opt.tolerance * scale) {
            GroundState out;
            out.energy = energy;
            out.wavefunction = psi.real();
            normalize_and_fix_sign(out.wavefunction, grid.spacing());
            out.method = SpectrumMethod::ImaginaryTime;
            out.iterations = it;
            out.seed = opt.seed;
            out.step = d;
            return out;
        }
        previous = energy;
        have_previous = true;
    }
    std::ostringstream msg;
    msg << "imaginary time: no convergence after " << opt.max_iterations << " steps (step " << d
        << ", last energy " << previous << ")";
    throw ConvergenceError(msg.str());
}

}  // namespace

GroundState ground_state_energy_numeric(const PhysicalParams& params, const SpatialGrid& grid,
                                        const PotentialSpec& pot, SpectrumMethod method,
                                        const ImaginaryTimeOptions& options, KineticOrder order) {
    if (method == SpectrumMethod::Diagonalization) return ground_state_diagonalize(params, grid, pot, order);
    return ground_state_imaginary_time(params, grid, pot, options, order);
}

}  // namespace gupqm
