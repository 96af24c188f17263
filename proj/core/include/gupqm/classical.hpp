#pragma once

// GUP classical mechanics: Lagrangian/Hamiltonian values, the Legendre map
// between them, the velocity bound, free and oscillator trajectories, and a
// numerical action quadrature used as the oracle for closed-form actions.

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "gupqm/model.hpp"
#include "gupqm/potential.hpp"

namespace gupqm {

/// |sin(omega T)| must exceed this for oscillator boundary-value problems.
inline constexpr double kCausticTolerance = 1e-9;

/// Minimum number of samples for path differentiation and quadrature.
inline constexpr std::size_t kMinPathMesh = 64;

/// Which kinetic bracket the Lagrangian uses.
///
/// Beta1:          (m/2) v^2 (1 - 2 beta m^2 v^2)
/// Beta2Printed:   (m/2) v^2 (1 - 2 beta m^2 v^2 - 15 beta^2 m^4 v^4)
/// Beta2Legendre:  (m/2) v^2 (1 - 2 beta m^2 v^2 + 15 beta^2 m^4 v^4)
///
/// The two second-order forms differ in the sign of the beta^2 term; the
/// Legendre one is what the transform of H = p^2/2m + beta p^4/m +
/// beta^2 p^6/2m produces. Neither is a default.
enum class LagrangianOrder { Beta1, Beta2Printed, Beta2Legendre };

/// Beta1: p^2/2m + beta p^4/m.  Beta2: adds beta^2 p^6 / 2m.
enum class HamiltonianOrder { Beta1, Beta2 };

/// The bracket multiplying (m/2) v^2.
double kinetic_factor(const PhysicalParams& params, double qdot, LagrangianOrder order);

/// Whether the kinetic bracket is >= 0 at this velocity.
bool kinetic_factor_nonnegative(const PhysicalParams& params, double qdot, LagrangianOrder order);

/// L(qdot, q). Throws BoundViolation at order Beta1 when 2 beta m^2 qdot^2 > 1.
/// The beta^2 forms are free-particle kinetic terms; V is still subtracted.
double lagrangian_value(const PhysicalParams& params, double qdot, double q,
                        const PotentialSpec& pot, LagrangianOrder order);

double hamiltonian_value(const PhysicalParams& params, double p, double q,
                         const PotentialSpec& pot, HamiltonianOrder order);

struct VelocityBound {
    double qdot_max = std::numeric_limits<double>::infinity();
    double p_max = std::numeric_limits<double>::infinity();

    bool bounded() const { return qdot_max < std::numeric_limits<double>::infinity(); }
};

/// qdot_max = 1/sqrt(2 beta m^2), p_max = m qdot_max = 1/sqrt(2 beta).
/// beta = 0 returns the unbounded sentinel (both infinite).
VelocityBound velocity_bound(const PhysicalParams& params);

/// dL/dqdot at order Beta1: m v - 4 beta m^3 v^3.
double canonical_momentum(const PhysicalParams& params, double qdot);

/// Inverse of canonical_momentum on its monotone branch
/// |v| < 1/(m sqrt(12 beta)), by safeguarded Newton iteration.
/// Throws BoundViolation when |p| exceeds the branch maximum.
double velocity_from_momentum(const PhysicalParams& params, double p);

/// dH/dp.
double hamiltonian_velocity(const PhysicalParams& params, double p, HamiltonianOrder order);

/// H(p(v)) - (p(v) v - L(v)) for the free Beta1 pair. O(beta^2).
double legendre_defect(const PhysicalParams& params, double qdot);

/// Numerical Legendre transform of the free Hamiltonian: solves
/// dH/dp = qdot for p near m qdot and returns p qdot - H(p).
double legendre_lagrangian(const PhysicalParams& params, double qdot, HamiltonianOrder order);

/// Coefficient c in L = (m/2) v^2 (1 - 2 beta m^2 v^2 + c beta^2 m^4 v^4),
/// recovered numerically from legendre_lagrangian at order Beta2 by
/// Richardson extrapolation in beta. The exact transform gives c = +15.
double legendre_beta2_coefficient(const PhysicalParams& params, double qdot);

/// Straight-line classical action: s0 = m D^2 / 2T, s1 = -m^3 D^4 / T^3.
ActionValue free_action(const PhysicalParams& params, double q0, double qf, double T);

/// q(t) = q0 + (qf - q0) t / T sampled on mesh_size points.
ClassicalPath free_path(double q0, double qf, double T, std::size_t mesh_size);

/// A, B, F, H for the oscillator boundary-value problem.
/// Throws CausticError when |sin(omega T)| <= kCausticTolerance.
TrajectoryConstants ho_constants(const PhysicalParams& params, double q0, double qf, double T);

/// O(beta) oscillator trajectory at time t for the given constants.
double ho_position(const PhysicalParams& params, const TrajectoryConstants& c, double t);

/// O(beta) oscillator trajectory sampled on mesh_size points, with its constants.
std::pair<ClassicalPath, TrajectoryConstants> ho_trajectory(const PhysicalParams& params, double q0,
                                                            double qf, double T,
                                                            std::size_t mesh_size);

struct PathDerivatives {
    std::vector<double> velocity;
    std::vector<double> acceleration;
};

/// Fourth-order finite differences: centered in the interior, one-sided
/// closures on the two nodes nearest each end.
PathDerivatives differentiate(const ClassicalPath& path);

/// max_t |qddot - 12 beta m^2 qdot^2 qddot + omega^2 q| over the mesh.
double eom_residual(const PhysicalParams& params, const ClassicalPath& path);

/// Composite Simpson quadrature of L along the sampled path (3/8 rule on the
/// last three intervals when their count is odd). s0 collects the beta^0
/// Lagrangian, s1 and s2 the coefficients of beta and beta^2 evaluated on
/// the same path; beta is taken from params.
ActionValue action_quadrature(const PhysicalParams& params, const ClassicalPath& path,
                              const PotentialSpec& pot, LagrangianOrder order);

struct BetaCoefficient {
    double value = 0.0;       // Richardson estimate
    double beta_probe = 0.0;  // beta used for the coarse difference
    double coarse = 0.0;      // (S(beta) - S(0)) / beta
    double fine = 0.0;        // (S(beta/2) - S(0)) / (beta/2)
};

/// Coefficient of beta in the oscillator classical action, from quadrature
/// of L along ho_trajectory at beta and beta/2 followed by Richardson
/// extrapolation. beta_probe <= 0 picks 1e-4 / (m^2 v_char^2).
BetaCoefficient ho_action_beta1_quadrature(const PhysicalParams& params, double q0, double qf,
                                           double T, std::size_t mesh_size = 2049,
                                           double beta_probe = 0.0);

}  // namespace gupqm
