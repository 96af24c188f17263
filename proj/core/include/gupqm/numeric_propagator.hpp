#pragma once

// Grid-based reference propagators and spectra on a periodic lattice.
//
// The kinetic operator is diagonal on the momentum lattice, so p^4 and p^6
// are exact there. Position-space matrices are real symmetric (Hamiltonian)
// or complex symmetric (propagators).

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gupqm/model.hpp"
#include "gupqm/potential.hpp"

namespace gupqm {

enum class KineticOrder { Beta0, Beta1, Beta2 };

std::string_view to_string(KineticOrder k);

/// p^2/2m [+ beta p^4/m [+ beta^2 p^6/2m]] at every lattice momentum, FFT order.
Eigen::VectorXd kinetic_dispersion(const PhysicalParams& params, const SpatialGrid& grid,
                                   KineticOrder order);

/// C-infinity step: 1 for x <= flat, 0 for x >= cutoff, smooth in between.
double smooth_taper(double x, double flat, double cutoff);

class HamiltonianOperator {
public:
    HamiltonianOperator(Eigen::MatrixXd matrix, Eigen::VectorXd dispersion, Eigen::VectorXd potential,
                        SpatialGrid grid, PhysicalParams params, KineticOrder order);

    /// H_ij in the position basis (orthonormal lattice vectors).
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const Eigen::VectorXd& dispersion() const { return dispersion_; }
    const Eigen::VectorXd& potential() const { return potential_; }
    const SpatialGrid& grid() const { return grid_; }
    const PhysicalParams& params() const { return params_; }
    KineticOrder order() const { return order_; }

    /// max|H - H^T| / max|H|.
    double hermiticity_defect() const;

private:
    Eigen::MatrixXd matrix_;
    Eigen::VectorXd dispersion_;
    Eigen::VectorXd potential_;
    SpatialGrid grid_;
    PhysicalParams params_;
    KineticOrder order_;
};

/// Kinetic part conjugated from the momentum lattice plus diagonal V(q_i).
///
/// The lattice is not checked against the momentum bound: the operator is
/// bounded below on any lattice. Use SpatialGrid::bounded or validate() when
/// the bound matters.
HamiltonianOperator build_hamiltonian(const PhysicalParams& params, const SpatialGrid& grid,
                                      const PotentialSpec& pot,
                                      KineticOrder order = KineticOrder::Beta1);

/// Controls the resolution window of the sampled short-time kernel.
///
/// Entries with |delta| / tau above the lattice velocity limit alias on the
/// grid. With window on, entries are multiplied by smooth_taper(|delta|,
/// flat, cutoff), where cutoff = cutoff_fraction * v_res * tau and
/// v_res = pi hbar / (m dq); for beta > 0 the cutoff is additionally capped
/// at velocity_safety * qdot_max * tau, and always at 0.45 L. The flat zone
/// is (flat_fraction / cutoff_fraction) * cutoff; inside it the entries are
/// the printed kernel unchanged.
struct ShortTimeOptions {
    bool window = true;
    double flat_fraction = 0.3;
    double cutoff_fraction = 0.9;
    double velocity_safety = 0.5;
};

/// K[i][j] for one slice of length tau, delta = q_i - q_j (minimum image):
///
///   sqrt(m / 2 pi i hbar tau) [1 + 3 i beta hbar m / tau - 6 beta m^2 delta^2 / tau^2]
///     exp(i m delta^2 / 2 hbar tau - i tau V(q_j) / hbar - i beta m^3 delta^4 / hbar tau^3)
///
/// Throws InvalidArgument for tau <= 0 and MeshTooCoarse when the window's
/// flat zone holds fewer than 16 lattice spacings.
KernelMatrix short_time_kernel(const PhysicalParams& params, const SpatialGrid& grid, double tau,
                               const PotentialSpec& pot, const ShortTimeOptions& options = {});

/// Warnings for the short-time preconditions: tau V_max / hbar >= 0.1 and
/// m dq^2 / (hbar tau) not small.
std::vector<Diagnostic> short_time_diagnostics(const PhysicalParams& params, const SpatialGrid& grid,
                                               double tau, const PotentialSpec& pot);

/// One Strang step exp(-i V tau/2hbar) exp(-i T_kin tau/hbar) exp(-i V tau/2hbar)
/// as a kernel (entries already divided by dq).
KernelMatrix split_step_kernel(const PhysicalParams& params, const SpatialGrid& grid, double tau,
                               const PotentialSpec& pot, KineticOrder order = KineticOrder::Beta1);

/// K(T) as the n-fold product of one-slice kernels with measure dq per
/// intermediate integration, by repeated squaring.
///
/// ShortTimeKernel requires n_slices >= 2. MomentumSplit uses
/// split_step_kernel with KineticOrder::Beta1.
KernelMatrix compose_kernel(const PhysicalParams& params, const SpatialGrid& grid,
                            const TimeSlicing& slicing, const PotentialSpec& pot,
                            const ShortTimeOptions& options = {});

/// Product of two kernels on the same grid: dq * A * B (A applied last).
KernelMatrix compose(const KernelMatrix& later, const KernelMatrix& earlier);

/// exp(-i H T / hbar) from the eigen-decomposition of build_hamiltonian.
KernelMatrix exact_propagator(const PhysicalParams& params, const SpatialGrid& grid, double T,
                              const PotentialSpec& pot, KineticOrder order = KineticOrder::Beta1);

/// Smooth low-pass filter on the momentum lattice used for pointwise
/// comparison of lattice kernels with continuum formulas: 1 up to
/// flat_fraction * p_max, tapering to 0 at cutoff_fraction * p_max.
struct MomentumWindow {
    double flat_fraction = 0.3;
    double cutoff_fraction = 1.0;
};

/// Band-limited interpolant of column j of K evaluated at q_j + delta,
/// after filtering the column with the momentum window.
complex interpolate_kernel(const KernelMatrix& kernel, std::size_t source, double delta,
                           const MomentumWindow& window = {});

/// Same as interpolate_kernel for many offsets (one FFT).
std::vector<complex> interpolate_kernel(const KernelMatrix& kernel, std::size_t source,
                                        const std::vector<double>& deltas,
                                        const MomentumWindow& window = {});

/// Lowest eigenvalues of build_hamiltonian, ascending. Requires 1 <= k < n/4.
EnergySpectrum excited_levels(const PhysicalParams& params, const SpatialGrid& grid,
                              const PotentialSpec& pot, std::size_t k,
                              KineticOrder order = KineticOrder::Beta1);

struct ImaginaryTimeOptions {
    std::uint64_t seed = 20240917;
    std::size_t max_iterations = 100000;
    double step = 0.0;            // <= 0 picks 1e-3 hbar / E_char
    double tolerance = 1e-12;     // relative change of the block energy
    std::size_t block = 100;      // steps per convergence check
};

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXd wavefunction;  // dq * sum psi^2 = 1, sum psi > 0
    SpectrumMethod method = SpectrumMethod::Diagonalization;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    double step = 0.0;
};

/// Lowest eigenpair by dense diagonalization or by imaginary-time Strang
/// evolution from a seeded random start (energy from the log-norm decrement).
/// Imaginary time throws ConvergenceError after max_iterations and
/// InvalidArgument for non-confining potentials.
GroundState ground_state_energy_numeric(const PhysicalParams& params, const SpatialGrid& grid,
                                        const PotentialSpec& pot, SpectrumMethod method,
                                        const ImaginaryTimeOptions& options = {},
                                        KineticOrder order = KineticOrder::Beta1);

/// Energy scale for default step sizes: hbar omega for harmonic potentials,
/// otherwise the potential range on the grid (or the kinetic energy at a
/// tenth of p_max when that range vanishes).
double characteristic_energy(const PhysicalParams& params, const SpatialGrid& grid,
                             const PotentialSpec& pot);

}  // namespace gupqm
