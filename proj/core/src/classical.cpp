#include "gupqm/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gupqm/errors.hpp"

namespace gupqm {

namespace {

void require_time(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("propagation time T must be > 0");
}

void require_mesh(std::size_t n) {
    if (n < kMinPathMesh) {
        std::ostringstream msg;
        msg << "path mesh has " << n << " points, need >= " << kMinPathMesh;
        throw MeshTooCoarse(msg.str());
    }
}

ClassicalPath sample_path(double q0, double qf, double T, std::size_t mesh_size, PathOrder order) {
    require_time(T);
    require_mesh(mesh_size);
    ClassicalPath path;
    path.q0 = q0;
    path.qf = qf;
    path.T = T;
    path.order = order;
    path.times.resize(mesh_size);
    path.positions.resize(mesh_size);
    const double dt = T / static_cast<double>(mesh_size - 1);
    for (std::size_t i = 0; i < mesh_size; ++i) path.times[i] = dt * static_cast<double>(i);
    path.times.back() = T;
    return path;
}

}  // namespace

double kinetic_factor(const PhysicalParams& params, double qdot, LagrangianOrder order) {
    const double x = params.beta * params.mass * params.mass * qdot * qdot;
    switch (order) {
        case LagrangianOrder::Beta1: return 1.0 - 2.0 * x;
        case LagrangianOrder::Beta2Printed: return 1.0 - 2.0 * x - 15.0 * x * x;
        case LagrangianOrder::Beta2Legendre: return 1.0 - 2.0 * x + 15.0 * x * x;
    }
    return 1.0;
}

bool kinetic_factor_nonnegative(const PhysicalParams& params, double qdot, LagrangianOrder order) {
    return kinetic_factor(params, qdot, order) >= 0.0;
}

double lagrangian_value(const PhysicalParams& params, double qdot, double q,
                        const PotentialSpec& pot, LagrangianOrder order) {
    if (order == LagrangianOrder::Beta1 && !kinetic_factor_nonnegative(params, qdot, order)) {
        std::ostringstream msg;
        msg << "velocity " << qdot << " beyond qdot_max = " << velocity_bound(params).qdot_max;
        throw BoundViolation(msg.str());
    }
    const double m = params.mass;
    return 0.5 * m * qdot * qdot * kinetic_factor(params, qdot, order) - pot(q, m);
}

double hamiltonian_value(const PhysicalParams& params, double p, double q, const PotentialSpec& pot,
                         HamiltonianOrder order) {
    const double m = params.mass;
    const double b = params.beta;
    const double p2 = p * p;
    double h = p2 / (2.0 * m) + b * p2 * p2 / m;
    if (order == HamiltonianOrder::Beta2) h += b * b * p2 * p2 * p2 / (2.0 * m);
    return h + pot(q, m);
}

VelocityBound velocity_bound(const PhysicalParams& params) {
    if (!(params.beta > 0.0)) return {};
    const double qdot_max = 1.0 / std::sqrt(2.0 * params.beta * params.mass * params.mass);
    return {qdot_max, params.mass * qdot_max};
}

double canonical_momentum(const PhysicalParams& params, double qdot) {
    const double m = params.mass;
    return m * qdot - 4.0 * params.beta * m * m * m * qdot * qdot * qdot;
}

double velocity_from_momentum(const PhysicalParams& params, double p) {
    const double m = params.mass;
    if (!(params.beta > 0.0)) return p / m;

    // p(v) increases monotonically up to the turning point where 1 - 12 beta m^2 v^2 = 0.
    const double v_turn = 1.0 / (m * std::sqrt(12.0 * params.beta));
    const double p_turn = canonical_momentum(params, v_turn);
    if (std::abs(p) > p_turn) {
        std::ostringstream msg;
        msg << "|p| = " << std::abs(p) << " exceeds the monotone-branch maximum " << p_turn;
        throw BoundViolation(msg.str());
    }
    double lo = -v_turn;
    double hi = v_turn;
    double v = std::clamp(p / m, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double f = canonical_momentum(params, v) - p;
        if (f > 0.0) hi = v; else lo = v;
        const double df = m * (1.0 - 12.0 * params.beta * m * m * v * v);
        double next = df > 0.0 ? v - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - v) <= 1e-16 * std::max(1.0, std::abs(v))) return next;
        v = next;
    }
    return v;
}

double hamiltonian_velocity(const PhysicalParams& params, double p, HamiltonianOrder order) {
    const double m = params.mass;
    const double b = params.beta;
    double v = p / m + 4.0 * b * p * p * p / m;
    if (order == HamiltonianOrder::Beta2) v += 3.0 * b * b * std::pow(p, 5) / m;
    return v;
}

double legendre_defect(const PhysicalParams& params, double qdot) {
    const auto free = PotentialSpec::free();
    const double p = canonical_momentum(params, qdot);
    const double energy = p * qdot - lagrangian_value(params, qdot, 0.0, free, LagrangianOrder::Beta1);
    return hamiltonian_value(params, p, 0.0, free, HamiltonianOrder::Beta1) - energy;
}

double legendre_lagrangian(const PhysicalParams& params, double qdot, HamiltonianOrder order) {
    const double m = params.mass;
    const double b = params.beta;
    // dH/dp is strictly increasing in p for beta >= 0, so Newton from m*qdot converges.
    double p = m * qdot;
    for (int it = 0; it < 100; ++it) {
        const double f = hamiltonian_velocity(params, p, order) - qdot;
        double df = 1.0 / m + 12.0 * b * p * p / m;
        if (order == HamiltonianOrder::Beta2) df += 15.0 * b * b * std::pow(p, 4) / m;
        const double step = f / df;
        p -= step;
        if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(p))) break;
    }
    return p * qdot - hamiltonian_value(params, p, 0.0, PotentialSpec::free(), order);
}

double legendre_beta2_coefficient(const PhysicalParams& params, double qdot) {
    const double m = params.mass;
    if (qdot == 0.0) throw InvalidArgument("legendre_beta2_coefficient: qdot must be non-zero");
    const double v2 = qdot * qdot;
    const auto coefficient_at = [&](double b) {
        const PhysicalParams p = params.with_beta(b);
        const double lag = legendre_lagrangian(p, qdot, HamiltonianOrder::Beta2);
        const double x = b * m * m * v2;
        const double first_order = 0.5 * m * v2 * (1.0 - 2.0 * x);
        return (lag - first_order) / (0.5 * m * v2 * x * x);
    };
    const double b = 1e-3 / (m * m * v2);
    return 2.0 * coefficient_at(0.5 * b) - coefficient_at(b);
}

ActionValue free_action(const PhysicalParams& params, double q0, double qf, double T) {
    require_time(T);
    const double m = params.mass;
    const double d = qf - q0;
    const double d2 = d * d;
    ActionValue s;
    s.s0 = m * d2 / (2.0 * T);
    s.s1 = -m * m * m * d2 * d2 / (T * T * T);
    s.beta = params.beta;
    return s;
}

ClassicalPath free_path(double q0, double qf, double T, std::size_t mesh_size) {
    ClassicalPath path = sample_path(q0, qf, T, mesh_size, PathOrder::Beta0);
    for (std::size_t i = 0; i < mesh_size; ++i) {
        path.positions[i] = q0 + (qf - q0) * path.times[i] / T;
    }
    path.positions.back() = qf;
    return path;
}

TrajectoryConstants ho_constants(const PhysicalParams& params, double q0, double qf, double T) {
    require_time(T);
    const double w = params.omega;
    if (!(w > 0.0)) throw InvalidArgument("oscillator trajectory requires omega > 0");
    const double wT = w * T;
    const double s1 = std::sin(wT);
    if (std::abs(s1) <= kCausticTolerance) {
        std::ostringstream msg;
        msg << "caustic: |sin(omega T)| = " << std::abs(s1) << " at omega T = " << wT;
        throw CausticError(msg.str());
    }
    const double m2 = params.mass * params.mass;
    const double w2 = w * w;
    const double csc = 1.0 / s1;
    const double c1 = std::cos(wT);
    const double c3 = std::cos(3.0 * wT);
    const double s3 = std::sin(3.0 * wT);

    TrajectoryConstants k;
    k.A = q0;
    k.B = (qf - q0 * c1) * csc;
    const double A = k.A;
    const double B = k.B;
    k.F = 0.375 * m2 * w2 * (A * A * A - 3.0 * A * B * B);
    k.H = 12.0 * m2 * w2 * csc *
              (0.125 * wT * (A * A * A + A * B * B) * s1 +
               (1.0 / 32.0) * (A * A * A - 3.0 * A * B * B) * c3 +
               (1.0 / 32.0) * (3.0 * A * A * B - B * B * B) * s3 -
               0.125 * wT * (A * A * B + B * B * B) * c1) -
          0.375 * m2 * w2 * (A * A * A - 3.0 * A * B * B) * c1 * csc;
    return k;
}

double ho_position(const PhysicalParams& params, const TrajectoryConstants& c, double t) {
    const double w = params.omega;
    const double wt = w * t;
    const double cw = std::cos(wt);
    const double sw = std::sin(wt);
    const double A = c.A;
    const double B = c.B;
    const double w2 = w * w;
    const double w3 = w2 * w;
    const double secular = 0.125 * t * w3 * A * (A * A + B * B) * sw +
                           (1.0 / 32.0) * w2 * A * (A * A - 3.0 * B * B) * std::cos(3.0 * wt) -
                           0.125 * t * w3 * B * (A * A + B * B) * cw +
                           (1.0 / 32.0) * w2 * B * (3.0 * A * A - B * B) * std::sin(3.0 * wt);
    const double correction =
        c.F * cw + c.H * sw - 12.0 * params.mass * params.mass * secular;
    return A * cw + B * sw + params.beta * correction;
}

std::pair<ClassicalPath, TrajectoryConstants> ho_trajectory(const PhysicalParams& params, double q0,
                                                            double qf, double T,
                                                            std::size_t mesh_size) {
    const TrajectoryConstants c = ho_constants(params, q0, qf, T);
    ClassicalPath path = sample_path(q0, qf, T, mesh_size,
                                     params.beta > 0.0 ? PathOrder::Beta1 : PathOrder::Beta0);
    for (std::size_t i = 0; i < mesh_size; ++i) path.positions[i] = ho_position(params, c, path.times[i]);
    return {std::move(path), c};
}

PathDerivatives differentiate(const ClassicalPath& path) {
    const std::size_t n = path.size();
    require_mesh(n);
    const double h = path.dt();
    const auto& f = path.positions;
    PathDerivatives d;
    d.velocity.resize(n);
    d.acceleration.resize(n);

    const double i12h = 1.0 / (12.0 * h);
    const double i12h2 = 1.0 / (12.0 * h * h);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d.velocity[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * i12h;
        d.acceleration[i] =
            (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * i12h2;
    }
    // one-sided closures; the far end mirrors the near end
    const auto closure = [&](auto at, double sign, std::size_t i0, std::size_t i1) {
        d.velocity[i0] = sign * (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) * i12h;
        d.velocity[i1] = sign * (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) * i12h;
        d.acceleration[i0] =
            (45.0 * at(0) - 154.0 * at(1) + 214.0 * at(2) - 156.0 * at(3) + 61.0 * at(4) - 10.0 * at(5)) * i12h2;
        d.acceleration[i1] =
            (10.0 * at(0) - 15.0 * at(1) - 4.0 * at(2) + 14.0 * at(3) - 6.0 * at(4) + at(5)) * i12h2;
    };
    closure([&](std::size_t k) { return f[k]; }, 1.0, 0, 1);
    closure([&](std::size_t k) { return f[n - 1 - k]; }, -1.0, n - 1, n - 2);
    return d;
}

double eom_residual(const PhysicalParams& params, const ClassicalPath& path) {
    const PathDerivatives d = differentiate(path);
    const double m2 = params.mass * params.mass;
    const double w2 = params.omega * params.omega;
    double worst = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double v = d.velocity[i];
        const double a = d.acceleration[i];
        const double r = a - 12.0 * params.beta * m2 * v * v * a + w2 * path.positions[i];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

namespace {

/// Composite Simpson weights (times h) for n equally spaced nodes.
std::vector<double> simpson_weights(std::size_t n) {
    std::vector<double> w(n, 0.0);
    const std::size_t intervals = n - 1;
    const std::size_t simpson_intervals = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_intervals; i += 2) {
        w[i] += 1.0 / 3.0;
        w[i + 1] += 4.0 / 3.0;
        w[i + 2] += 1.0 / 3.0;
    }
    if (simpson_intervals != intervals) {
        const std::size_t s = simpson_intervals;
        w[s] += 3.0 / 8.0;
        w[s + 1] += 9.0 / 8.0;
        w[s + 2] += 9.0 / 8.0;
        w[s + 3] += 3.0 / 8.0;
    }
    return w;
}

}  // namespace

ActionValue action_quadrature(const PhysicalParams& params, const ClassicalPath& path,
                              const PotentialSpec& pot, LagrangianOrder order) {
    const PathDerivatives d = differentiate(path);
    const std::vector<double> w = simpson_weights(path.size());
    const double h = path.dt();
    const double m = params.mass;
    const double m3 = m * m * m;
    const double m5 = m3 * m * m;
    double c2 = 0.0;
    if (order == LagrangianOrder::Beta2Printed) c2 = -7.5;
    if (order == LagrangianOrder::Beta2Legendre) c2 = 7.5;

    ActionValue s;
    s.beta = params.beta;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double v = d.velocity[i];
        const double v2 = v * v;
        s.s0 += w[i] * (0.5 * m * v2 - pot(path.positions[i], m));
        s.s1 += w[i] * (-m3 * v2 * v2);
        s.s2 += w[i] * (c2 * m5 * v2 * v2 * v2);
    }
    s.s0 *= h;
    s.s1 *= h;
    s.s2 *= h;
    return s;
}

BetaCoefficient ho_action_beta1_quadrature(const PhysicalParams& params, double q0, double qf,
                                           double T, std::size_t mesh_size, double beta_probe) {
    const auto pot = PotentialSpec::harmonic(params.omega);
    const auto action_at = [&](double b) {
        const PhysicalParams p = params.with_beta(b);
        const auto [path, constants] = ho_trajectory(p, q0, qf, T, mesh_size);
        return action_quadrature(p, path, pot, LagrangianOrder::Beta1).total();
    };

    if (!(beta_probe > 0.0)) {
        const auto [path0, c0] = ho_trajectory(params.with_beta(0.0), q0, qf, T, mesh_size);
        const PathDerivatives d = differentiate(path0);
        double v_char = 0.0;
        for (double v : d.velocity) v_char = std::max(v_char, std::abs(v));
        v_char = std::max(v_char, 1e-12);
        beta_probe = 1e-4 / (params.mass * params.mass * v_char * v_char);
    }

    BetaCoefficient out;
    out.beta_probe = beta_probe;
    const double s0 = action_at(0.0);
    out.coarse = (action_at(beta_probe) - s0) / beta_probe;
    out.fine = (action_at(0.5 * beta_probe) - s0) / (0.5 * beta_probe);
    out.value = 2.0 * out.fine - out.coarse;
    return out;
}

}  // namespace gupqm
