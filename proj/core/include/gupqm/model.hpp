#pragma once

// Shared value types and unit conventions. Every quantity carries explicit
// hbar and mass; nothing here does physics beyond bookkeeping.

#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gupqm {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Physical constants and couplings of a run.
///
/// beta is the GUP parameter (momentum^-2), theta the noncommutative
/// parameter (length^2; only read by the NC kernels), omega = 0 means no
/// oscillator potential.
struct PhysicalParams {
    double mass = 1.0;
    double hbar = 1.0;
    double beta = 0.0;
    double omega = 0.0;
    double theta = 0.0;

    /// m = hbar = 1.
    static PhysicalParams natural(double beta = 0.0, double omega = 0.0, double theta = 0.0) {
        return PhysicalParams{1.0, 1.0, beta, omega, theta};
    }

    PhysicalParams with_beta(double b) const {
        PhysicalParams p = *this;
        p.beta = b;
        return p;
    }
    PhysicalParams with_omega(double w) const {
        PhysicalParams p = *this;
        p.omega = w;
        return p;
    }
    PhysicalParams with_mass(double m) const {
        PhysicalParams p = *this;
        p.mass = m;
        return p;
    }

    /// beta m^2 v^2 for a characteristic velocity v.
    double epsilon_free(double v_char) const { return beta * mass * mass * v_char * v_char; }
    /// beta m hbar omega.
    double epsilon_ho() const { return beta * mass * hbar * omega; }
};

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity s);

struct Diagnostic {
    Severity severity = Severity::Info;
    std::string code;
    std::string message;
    double value = 0.0;
};

bool has_errors(const std::vector<Diagnostic>& diags);

/// Throws InvalidArgument listing every error-level diagnostic, if any.
void throw_if_errors(const std::vector<Diagnostic>& diags, std::string_view context);

/// Field-range diagnostics for the parameters alone. Warnings for
/// beta m hbar omega > 0.1.
std::vector<Diagnostic> validate(const PhysicalParams& params);

/// Throws InvalidArgument when any field is out of range.
void require_valid(const PhysicalParams& params);

/// Perturbative formulas are flagged above this dimensionless size.
inline constexpr double kEpsilonWarn = 0.1;

/// Default fraction of 1/sqrt(2 beta) a lattice may reach.
inline constexpr double kDefaultBoundSafety = 0.5;

/// Uniform periodic position lattice on [q_min, q_max) with n points.
///
/// Momentum lattice p_k = 2 pi hbar k / L for k in [-n/2, n/2), stored in
/// FFT order (0, 1, ..., n/2-1, -n/2, ..., -1).
class SpatialGrid {
public:
    /// Geometric validity only: n >= 16, n even, q_max > q_min.
    static SpatialGrid create(double q_min, double q_max, std::size_t n_points);

    /// Like create(), and additionally rejects lattices with
    /// max|p_k| >= safety / sqrt(2 beta) when beta > 0.
    static SpatialGrid bounded(double q_min, double q_max, std::size_t n_points,
                               const PhysicalParams& params,
                               double safety = kDefaultBoundSafety);

    /// Symmetric box [-L/2, L/2).
    static SpatialGrid centered(double length, std::size_t n_points) {
        return create(-0.5 * length, 0.5 * length, n_points);
    }

    double q_min() const { return q_min_; }
    double q_max() const { return q_max_; }
    std::size_t size() const { return n_; }
    double length() const { return q_max_ - q_min_; }
    double spacing() const { return length() / static_cast<double>(n_); }

    double position(std::size_t i) const { return q_min_ + static_cast<double>(i) * spacing(); }
    Eigen::VectorXd positions() const;

    /// Signed lattice index of FFT slot j: j for j < n/2, j - n otherwise.
    long long signed_index(std::size_t j) const;
    double wavenumber(std::size_t j) const;
    double momentum(std::size_t j, double hbar) const { return hbar * wavenumber(j); }
    Eigen::VectorXd momenta(double hbar) const;

    /// pi hbar n / L, attained at k = -n/2.
    double max_momentum(double hbar) const;

    /// Nearest grid index to q (no wrapping; q must lie in the box).
    std::size_t index_of(double q) const;

    /// Minimum-image separation a - b on the periodic box.
    double periodic_delta(double a, double b) const;

    bool operator==(const SpatialGrid& other) const = default;

private:
    SpatialGrid(double q_min, double q_max, std::size_t n) : q_min_(q_min), q_max_(q_max), n_(n) {}

    double q_min_;
    double q_max_;
    std::size_t n_;
};

/// Bound/epsilon diagnostics for a parameter set on a lattice.
///
/// Reports the velocity bound as Info when beta > 0, an Error when the
/// lattice reaches safety / sqrt(2 beta), and Warnings when
/// epsilon_free(v_char) or epsilon_ho exceeds 0.1. v_char <= 0 skips the
/// free-particle epsilon.
std::vector<Diagnostic> validate(const PhysicalParams& params, const SpatialGrid& grid,
                                 double safety = kDefaultBoundSafety, double v_char = 0.0);

enum class SliceScheme { ShortTimeKernel, MomentumSplit };

std::string_view to_string(SliceScheme s);

/// Division of a propagation time into equal slices.
class TimeSlicing {
public:
    static TimeSlicing create(double total, std::size_t n_slices, SliceScheme scheme);

    double total() const { return total_; }
    std::size_t slices() const { return n_slices_; }
    double tau() const { return total_ / static_cast<double>(n_slices_); }
    SliceScheme scheme() const { return scheme_; }

private:
    TimeSlicing(double total, std::size_t n, SliceScheme scheme)
        : total_(total), n_slices_(n), scheme_(scheme) {}

    double total_;
    std::size_t n_slices_;
    SliceScheme scheme_;
};

/// How a KernelMatrix was produced.
enum class KernelScheme { ShortTimeKernel, MomentumSplit, Exact };

std::string_view to_string(KernelScheme s);

/// Transition amplitudes K[i][j] = <q_i, T | q_j, 0> on a lattice.
///
/// Entries carry units of 1/length; composition integrates with measure dq,
/// so a unitary evolution satisfies dq * sum_k conj(K[k][i]) K[k][j] = delta_ij / dq.
class KernelMatrix {
public:
    KernelMatrix(Eigen::MatrixXcd entries, SpatialGrid grid, double time, PhysicalParams params,
                 KernelScheme scheme);

    const Eigen::MatrixXcd& entries() const { return entries_; }
    const SpatialGrid& grid() const { return grid_; }
    double time() const { return time_; }
    const PhysicalParams& params() const { return params_; }
    KernelScheme scheme() const { return scheme_; }

    std::size_t size() const { return grid_.size(); }
    complex operator()(std::size_t i, std::size_t j) const { return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

    /// psi(q_i) -> dq * sum_j K[i][j] psi(q_j).
    Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;

    /// max_ij |dq^2 (K^dagger K)_ij - delta_ij|.
    double unitarity_defect() const;

private:
    Eigen::MatrixXcd entries_;
    SpatialGrid grid_;
    double time_;
    PhysicalParams params_;
    KernelScheme scheme_;
};

/// Integration constants of the O(beta) oscillator trajectory.
struct TrajectoryConstants {
    double A = 0.0;
    double B = 0.0;
    double F = 0.0;
    double H = 0.0;
};

enum class PathOrder { Beta0, Beta1 };

/// A classical path sampled on a uniform time mesh t_i = i T / (N - 1).
struct ClassicalPath {
    double q0 = 0.0;
    double qf = 0.0;
    double T = 0.0;
    std::vector<double> times;
    std::vector<double> positions;
    PathOrder order = PathOrder::Beta0;

    std::size_t size() const { return positions.size(); }
    double dt() const { return T / static_cast<double>(positions.size() - 1); }
};

/// Classical action split by order in beta: S = s0 + beta s1 + beta^2 s2.
struct ActionValue {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double beta = 0.0;

    double total() const { return s0 + beta * s1 + beta * beta * s2; }
};

enum class SpectrumMethod { Diagonalization, ImaginaryTime };

std::string_view to_string(SpectrumMethod m);

struct EnergySpectrum {
    std::vector<double> eigenvalues;  // ascending
    SpectrumMethod method = SpectrumMethod::Diagonalization;
    SpatialGrid grid;
};

/// Where a reported number came from.
enum class Provenance { PrintedFormula, Oracle, Derived };

std::string_view to_string(Provenance p);

}  // namespace gupqm
