#pragma once

// Closed-form transition amplitudes and actions as printed, including the
// terms whose dimensions or signs look suspect. Every formula here has a
// numeric counterpart in classical.hpp or numeric_propagator.hpp.

#include <array>
#include <cstddef>

#include "gupqm/classical.hpp"
#include "gupqm/model.hpp"

namespace gupqm {

using Vec2 = std::array<double, 2>;

/// Below this omega*T the csc/cot expressions switch to series (beta^0
/// action) or 50-digit arithmetic (printed beta^1 action).
inline constexpr double kSmallAngle = 1e-2;

/// sqrt(m / (2 pi i hbar T)), principal branch: phase -pi/4.
complex free_prefactor(const PhysicalParams& params, double T);

/// sqrt(m/(2 pi i hbar T)) (1 + 3 i beta hbar m / T - 6 beta m^2 D^2 / T^2).
complex fluctuation_factor(const PhysicalParams& params, double q0, double qf, double T);

/// fluctuation_factor * exp(i S_c / hbar) with S_c from free_action.
complex free_kernel_gup(const PhysicalParams& params, double q0, double qf, double T);

/// Ordinary free-particle kernel sqrt(m/(2 pi i hbar T)) exp(i m D^2 / 2 hbar T).
complex free_kernel_standard(const PhysicalParams& params, double q0, double qf, double T);

/// (1/2) m omega csc(omega T) [(q0^2 + qf^2) cos(omega T) - 2 q0 qf].
/// Small omega*T uses the Taylor series of csc and cot.
double ho_action_beta0(const PhysicalParams& params, double q0, double qf, double T);

struct TaggedValue {
    double value = 0.0;
    Provenance provenance = Provenance::PrintedFormula;
};

/// Coefficient of beta in the oscillator classical action, transcribed term
/// by term from the printed expression with w = omega (including its
/// (w^2 + 3)-type sums). Tagged PrintedFormula.
TaggedValue ho_action_beta1_printed(const PhysicalParams& params, double q0, double qf, double T);

enum class HoActionSource { Printed, Quadrature };

/// sqrt(m omega / (2 pi i hbar sin omega T))
///   [1 + 3 i beta hbar m / T - 6 beta m^2 D^2 / T^2 - (3/4) beta m hbar omega^2 T cot(omega T)]
///   exp(i S_c / hbar),  S_c = ho_action_beta0 + beta * (printed or quadrature coefficient).
complex ho_kernel_gup(const PhysicalParams& params, double q0, double qf, double T,
                      HoActionSource source = HoActionSource::Quadrature,
                      std::size_t quadrature_mesh = 2049);

/// Mehler kernel sqrt(m omega / (2 pi i hbar sin omega T)) exp(i S_0 / hbar).
complex mehler_kernel(const PhysicalParams& params, double q0, double qf, double T);

/// Noncommutative-plane free kernel as printed:
/// sqrt(m / (2 pi (i hbar T + m theta))) exp[-m |xf - x0|^2 / (2 (i hbar T + m theta))].
complex nc_free_kernel(double m, double hbar, double theta, Vec2 x0, Vec2 xf, double T);

/// The recast O(theta) form as printed:
/// sqrt(m/(2 pi i hbar T)) [1 + i m theta/(2 hbar T) - (m^2 theta / 2 hbar^2) |xf - x0|^2 / T^2]
///   exp[-m |xf - x0|^2 / (2 (i hbar T + m theta))].
complex nc_free_kernel_expanded(double m, double hbar, double theta, Vec2 x0, Vec2 xf, double T);

/// The bracket of nc_free_kernel_expanded alone.
complex nc_bracket(double m, double hbar, double theta, Vec2 x0, Vec2 xf, double T);

/// Term-by-term comparison of the GUP free-kernel bracket with the NC bracket.
///
/// The phase terms 3 i beta hbar m / T and i m theta / (2 hbar T) match
/// when theta = 6 beta hbar^2; the displacement terms -6 beta m^2 D^2 / T^2
/// and -(m^2 theta / 2 hbar^2) (D/T)^2 match when theta = 12 beta hbar^2.
struct NcTermMap {
    complex gup_phase_term;
    complex nc_phase_term;
    double gup_displacement_term = 0.0;
    double nc_displacement_term = 0.0;
    double theta_from_phase = 0.0;         // 6 beta hbar^2
    double theta_from_displacement = 0.0;  // 12 beta hbar^2
    bool single_theta_maps_both = false;
};

/// Evaluated at the given beta (from params) and displacement D; the NC
/// side uses params.theta.
NcTermMap nc_term_map(const PhysicalParams& params, double displacement, double T);

/// (1/2) hbar omega (1 + (3/2) beta m hbar omega). Throws for omega <= 0.
double ground_state_energy_formula(const PhysicalParams& params);

}  // namespace gupqm
