#include "gupqm/analytic_kernels.hpp"

#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gupqm/errors.hpp"

namespace gupqm {

namespace {

constexpr complex kI{0.0, 1.0};

void require_time(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("propagation time T must be > 0");
}

void require_away_from_caustic(double omega, double T) {
    if (!(omega > 0.0)) throw InvalidArgument("oscillator formula requires omega > 0");
    const double s = std::sin(omega * T);
    if (std::abs(s) <= kCausticTolerance) {
        std::ostringstream msg;
        msg << "caustic: |sin(omega T)| = " << std::abs(s) << " at omega T = " << omega * T;
        throw CausticError(msg.str());
    }
}

/// Printed O(beta) oscillator action, generic in the scalar type so the
/// small-angle regime can run in 50-digit arithmetic.
template <typename Real>
Real hoag_printed(Real m, Real w, Real T, Real q0, Real qf) {
    using std::cos;
    using std::sin;
    const Real wT = w * T;
    const auto c = [&](int k) { return cos(Real(k) * wT); };
    const auto s = [&](int k) { return sin(Real(k) * wT); };
    const Real w2 = w * w;
    const Real T2 = T * T;
    const Real Q4 = q0 * q0 * q0 * q0 + qf * qf * qf * qf;
    const Real S2 = q0 * q0 + qf * qf;
    const Real P = q0 * qf;
    const Real P2 = q0 * q0 * qf * qf;

    Real bracket = (w2 + 3) * Q4 * c(5);
    bracket -= 4 * P * S2 * (w2 * (60 * T2 * (w2 + 1) - 11) - 33);
    bracket -= 16 * P * S2 * (w2 * (9 * T2 * (w2 + 1) + 2) + 6) * c(2);
    bracket -= 24 * P * (5 * w2 + 1) * S2 * wT * s(2);
    bracket -= 12 * P * (w2 + 1) * S2 * wT * s(4);
    bracket -= 12 * P * (w2 + 3) * S2 * c(4);
    bracket += 4 * (2 * Q4 * (w2 * (12 * T2 * (w2 + 1) - 1) - 3) +
                    3 * P2 * (w2 * (44 * T2 * (w2 + 1) - 5) - 15)) *
               c(1);
    bracket += (7 * Q4 * (w2 + 3) + 12 * P2 * (w2 * (4 * T2 * (w2 + 1) + 5) + 15)) * c(3);
    bracket += 24 * (-2 * Q4 + 3 * P2 * (3 * w2 + 1)) * wT * s(1);
    bracket += 24 * (Q4 * (w2 + 1) + P2 * (3 * w2 + 1)) * wT * s(3);

    const Real csc = 1 / sin(wT);
    const Real csc5 = csc * csc * csc * csc * csc;
    return -m * m * m * w * csc5 * bracket / 128;
}

}  // namespace

complex free_prefactor(const PhysicalParams& params, double T) {
    require_time(T);
    const double x = params.mass / (2.0 * kPi * params.hbar * T);
    return std::sqrt(complex(0.0, -x));
}

complex fluctuation_factor(const PhysicalParams& params, double q0, double qf, double T) {
    const complex pre = free_prefactor(params, T);
    const double m = params.mass;
    const double b = params.beta;
    const double d = qf - q0;
    const complex bracket(1.0 - 6.0 * b * m * m * d * d / (T * T), 3.0 * b * params.hbar * m / T);
    return pre * bracket;
}

complex free_kernel_gup(const PhysicalParams& params, double q0, double qf, double T) {
    const ActionValue s = free_action(params, q0, qf, T);
    return fluctuation_factor(params, q0, qf, T) * std::exp(kI * (s.total() / params.hbar));
}

complex free_kernel_standard(const PhysicalParams& params, double q0, double qf, double T) {
    const double d = qf - q0;
    return free_prefactor(params, T) * std::exp(kI * (params.mass * d * d / (2.0 * params.hbar * T)));
}

double ho_action_beta0(const PhysicalParams& params, double q0, double qf, double T) {
    require_time(T);
    require_away_from_caustic(params.omega, T);
    const double m = params.mass;
    const double w = params.omega;
    const double x = w * T;
    const double sum_sq = q0 * q0 + qf * qf;
    if (x < kSmallAngle) {
        const double x2 = x * x;
        // x cot x and x csc x
        const double xcot = 1.0 - x2 / 3.0 - x2 * x2 / 45.0 - 2.0 * x2 * x2 * x2 / 945.0 -
                            x2 * x2 * x2 * x2 / 4725.0;
        const double xcsc = 1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0 + 31.0 * x2 * x2 * x2 / 15120.0 +
                            127.0 * x2 * x2 * x2 * x2 / 604800.0;
        return m / (2.0 * T) * (sum_sq * xcot - 2.0 * q0 * qf * xcsc);
    }
    return 0.5 * m * w / std::sin(x) * (sum_sq * std::cos(x) - 2.0 * q0 * qf);
}

TaggedValue ho_action_beta1_printed(const PhysicalParams& params, double q0, double qf, double T) {
    require_time(T);
    require_away_from_caustic(params.omega, T);
    TaggedValue out;
    out.provenance = Provenance::PrintedFormula;
    if (params.omega * T < kSmallAngle) {
        using Big = boost::multiprecision::cpp_bin_float_50;
        out.value = static_cast<double>(
            hoag_printed<Big>(Big(params.mass), Big(params.omega), Big(T), Big(q0), Big(qf)));
    } else {
        out.value = hoag_printed<double>(params.mass, params.omega, T, q0, qf);
    }
    return out;
}

complex mehler_kernel(const PhysicalParams& params, double q0, double qf, double T) {
    require_time(T);
    require_away_from_caustic(params.omega, T);
    const double x = params.mass * params.omega /
                     (2.0 * kPi * params.hbar * std::sin(params.omega * T));
    const complex pre = std::sqrt(complex(0.0, -x));
    return pre * std::exp(kI * (ho_action_beta0(params, q0, qf, T) / params.hbar));
}

complex ho_kernel_gup(const PhysicalParams& params, double q0, double qf, double T,
                      HoActionSource source, std::size_t quadrature_mesh) {
    require_time(T);
    require_away_from_caustic(params.omega, T);
    const double m = params.mass;
    const double hb = params.hbar;
    const double b = params.beta;
    const double w = params.omega;
    const double d = qf - q0;

    const double x = m * w / (2.0 * kPi * hb * std::sin(w * T));
    const complex pre = std::sqrt(complex(0.0, -x));
    const complex bracket(
        1.0 - 6.0 * b * m * m * d * d / (T * T) - 0.75 * b * m * hb * w * w * T / std::tan(w * T),
        3.0 * b * hb * m / T);

    double s1 = 0.0;
    if (b != 0.0) {
        s1 = source == HoActionSource::Printed
                 ? ho_action_beta1_printed(params, q0, qf, T).value
                 : ho_action_beta1_quadrature(params, q0, qf, T, quadrature_mesh).value;
    }
    const double action = ho_action_beta0(params, q0, qf, T) + b * s1;
    return pre * bracket * std::exp(kI * (action / hb));
}

namespace {

double squared_distance(Vec2 a, Vec2 b) {
    const double dx = b[0] - a[0];
    const double dy = b[1] - a[1];
    return dx * dx + dy * dy;
}

void require_nc(double m, double hbar, double theta, double T) {
    require_time(T);
    if (!(m > 0.0) || !(hbar > 0.0)) throw InvalidArgument("nc kernel: m and hbar must be > 0");
    if (!(theta >= 0.0)) throw InvalidArgument("nc kernel: theta must be >= 0");
}

complex nc_exponential(double m, double hbar, double theta, double r2, double T) {
    const complex denom(m * theta, hbar * T);  // i hbar T + m theta
    return std::exp(-m * r2 / (2.0 * denom));
}

}  // namespace

complex nc_free_kernel(double m, double hbar, double theta, Vec2 x0, Vec2 xf, double T) {
    require_nc(m, hbar, theta, T);
    const double r2 = squared_distance(x0, xf);
    const complex denom(m * theta, hbar * T);
    return std::sqrt(m / (2.0 * kPi * denom)) * nc_exponential(m, hbar, theta, r2, T);
}

complex nc_bracket(double m, double hbar, double theta, Vec2 x0, Vec2 xf, double T) {
    require_nc(m, hbar, theta, T);
    const double r2 = squared_distance(x0, xf);
    return {1.0 - m * m * theta / (2.0 * hbar * hbar) * r2 / (T * T), m * theta / (2.0 * hbar * T)};
}

complex nc_free_kernel_expanded(double m, double hbar, double theta, Vec2 x0, Vec2 xf, double T) {
    const complex bracket = nc_bracket(m, hbar, theta, x0, xf, T);
    const double r2 = squared_distance(x0, xf);
    const complex pre = std::sqrt(complex(0.0, -m / (2.0 * kPi * hbar * T)));
    return pre * bracket * nc_exponential(m, hbar, theta, r2, T);
}

NcTermMap nc_term_map(const PhysicalParams& params, double displacement, double T) {
    require_time(T);
    const double m = params.mass;
    const double hb = params.hbar;
    const double d2 = displacement * displacement;
    NcTermMap map;
    map.gup_phase_term = complex(0.0, 3.0 * params.beta * hb * m / T);
    map.nc_phase_term = complex(0.0, m * params.theta / (2.0 * hb * T));
    map.gup_displacement_term = -6.0 * params.beta * m * m * d2 / (T * T);
    map.nc_displacement_term = -m * m * params.theta / (2.0 * hb * hb) * d2 / (T * T);
    map.theta_from_phase = 6.0 * params.beta * hb * hb;
    map.theta_from_displacement = 12.0 * params.beta * hb * hb;
    map.single_theta_maps_both =
        std::abs(map.theta_from_phase - map.theta_from_displacement) <=
        1e-12 * std::max(1.0, std::abs(map.theta_from_phase));
    return map;
}

double ground_state_energy_formula(const PhysicalParams& params) {
    if (!(params.omega > 0.0)) throw InvalidArgument("ground-state formula requires omega > 0");
    const double hw = params.hbar * params.omega;
    return 0.5 * hw * (1.0 + 1.5 * params.beta * params.mass * hw);
}

}  // namespace gupqm
