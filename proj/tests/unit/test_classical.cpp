#include <doctest.h>

#include <cmath>

#include "gupqm/analytic_kernels.hpp"
#include "gupqm/classical.hpp"
#include "gupqm/errors.hpp"
#include "oracles.hpp"

using namespace gupqm;

namespace {

const PotentialSpec kFree = PotentialSpec::free();

}  // namespace

TEST_CASE("Lagrangian values") {
    CHECK(lagrangian_value(PhysicalParams::natural(), 1.0, 0.0, kFree, LagrangianOrder::Beta1) == 0.5);
    CHECK(lagrangian_value(PhysicalParams::natural(0.01), 1.0, 0.0, kFree, LagrangianOrder::Beta1) ==
          doctest::Approx(0.49));
    const auto ho = PotentialSpec::harmonic(1.0);
    CHECK(lagrangian_value(PhysicalParams::natural(0.0, 1.0), 1.0, 2.0, ho, LagrangianOrder::Beta1) ==
          doctest::Approx(0.5 - 2.0));
}

TEST_CASE("the two beta^2 Lagrangians differ by 15 beta^2 m^5 qdot^6") {
    oracle::Sampler s(3);
    for (int i = 0; i < 100; ++i) {
        PhysicalParams p{s.uniform(0.3, 3.0), 1.0, s.log_uniform(1e-5, 1e-1), 0.0, 0.0};
        const double v = s.uniform(-3.0, 3.0);
        const double printed = lagrangian_value(p, v, 0.0, kFree, LagrangianOrder::Beta2Printed);
        const double legendre = lagrangian_value(p, v, 0.0, kFree, LagrangianOrder::Beta2Legendre);
        const double expected = 15.0 * p.beta * p.beta * std::pow(p.mass, 5) * std::pow(v, 6);
        CHECK(legendre - printed == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("Hamiltonian values") {
    const auto ho = PotentialSpec::harmonic(1.0);
    CHECK(hamiltonian_value(PhysicalParams::natural(0.3), 0.0, 1.5, ho, HamiltonianOrder::Beta1) ==
          doctest::Approx(ho(1.5, 1.0)));
    CHECK(hamiltonian_value(PhysicalParams::natural(0.01), 1.0, 0.0, kFree, HamiltonianOrder::Beta1) ==
          doctest::Approx(0.51));
    CHECK(hamiltonian_value(PhysicalParams::natural(0.01), 2.0, 0.0, kFree, HamiltonianOrder::Beta2) ==
          doctest::Approx(2.0 + 0.16 + 0.5 * 1e-4 * 64));
}

TEST_CASE("velocity bound") {
    auto b = velocity_bound(PhysicalParams::natural(0.02));
    CHECK(b.qdot_max == doctest::Approx(5.0));
    CHECK(b.p_max == doctest::Approx(5.0));
    b = velocity_bound(PhysicalParams::natural(0.02).with_mass(2.0));
    CHECK(b.qdot_max == doctest::Approx(2.5));
    CHECK(b.p_max == doctest::Approx(5.0));
    CHECK_FALSE(velocity_bound(PhysicalParams::natural()).bounded());
}

TEST_CASE("kinetic factor positivity flips at qdot_max") {
    for (double m : {1.0, 2.0}) {
        const auto p = PhysicalParams::natural(0.02).with_mass(m);
        const double vmax = velocity_bound(p).qdot_max;
        CHECK(kinetic_factor_nonnegative(p, vmax * (1 - 1e-12), LagrangianOrder::Beta1));
        CHECK(kinetic_factor_nonnegative(p, -vmax * (1 - 1e-12), LagrangianOrder::Beta1));
        CHECK_FALSE(kinetic_factor_nonnegative(p, vmax * (1 + 1e-12), LagrangianOrder::Beta1));
        CHECK(kinetic_factor(p, vmax, LagrangianOrder::Beta1) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK_NOTHROW(lagrangian_value(p, 0.99 * vmax, 0.0, kFree, LagrangianOrder::Beta1));
        CHECK_THROWS_AS(lagrangian_value(p, 1.01 * vmax, 0.0, kFree, LagrangianOrder::Beta1), BoundViolation);
    }
}

TEST_CASE("Legendre round trip defect is O(beta^2)") {
    std::vector<double> betas{1e-4, 1e-3, 1e-2};
    std::vector<double> defects;
    for (double b : betas) defects.push_back(legendre_defect(PhysicalParams::natural(b), 1.0));
    CHECK(oracle::loglog_slope(betas, defects) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(legendre_defect(PhysicalParams::natural(), 1.0) == 0.0);
}

TEST_CASE("velocity <-> momentum involution") {
    oracle::Sampler s(5);
    for (int i = 0; i < 200; ++i) {
        PhysicalParams p{s.uniform(0.5, 3.0), 1.0, s.log_uniform(1e-5, 1e-1), 0.0, 0.0};
        const double vlim = std::sqrt(0.1 / (2.0 * p.beta * p.mass * p.mass));
        const double v = s.uniform(-vlim, vlim);
        const double back = velocity_from_momentum(p, canonical_momentum(p, v));
        CHECK(std::abs(back - v) <= 1e-10 * std::max(1.0, std::abs(v)));
    }
    const auto p = PhysicalParams::natural(0.02);
    CHECK_THROWS_AS(velocity_from_momentum(p, 10.0), BoundViolation);
}

TEST_CASE("Legendre transform of the beta^2 Hamiltonian has coefficient +15") {
    CHECK(legendre_beta2_coefficient(PhysicalParams::natural(1e-3), 1.0) == doctest::Approx(15.0).epsilon(1e-3));
    CHECK(legendre_beta2_coefficient(PhysicalParams::natural(1e-3).with_mass(2.0), 0.5) ==
          doctest::Approx(15.0).epsilon(1e-3));
}

TEST_CASE("free action") {
    const auto p = PhysicalParams::natural(0.01);
    CHECK(free_action(p, 0.3, 0.3, 1.0).total() == 0.0);
    CHECK(free_action(p, 0.0, 1.0, 1.0).total() == doctest::Approx(0.49));
    CHECK_THROWS_AS(free_action(p, 0.0, 1.0, 0.0), InvalidArgument);

    const auto path = free_path(0.0, 1.0, 1.0, 257);
    const auto q = action_quadrature(PhysicalParams::natural(), path, kFree, LagrangianOrder::Beta1);
    CHECK(q.s0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q.s1 == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("free action matches quadrature along the straight line") {
    oracle::Sampler s(8);
    for (int i = 0; i < 20; ++i) {
        PhysicalParams p{s.uniform(0.5, 2.0), 1.0, s.log_uniform(1e-5, 1e-3), 0.0, 0.0};
        const double q0 = s.uniform(-1, 1), qf = s.uniform(-1, 1), T = s.uniform(0.5, 2.0);
        const auto closed = free_action(p, q0, qf, T);
        const auto quad = action_quadrature(p, free_path(q0, qf, T, 129), kFree, LagrangianOrder::Beta1);
        CHECK(std::abs(closed.s0 - quad.s0) < 1e-10);
        CHECK(std::abs(closed.s1 - quad.s1) < 1e-10);
    }
}

TEST_CASE("oscillator trajectory at beta = 0") {
    const auto p = PhysicalParams::natural(0.0, 1.0);
    const auto [path, c] = ho_trajectory(p, 0.0, 1.0, kPi / 2, 101);
    CHECK(c.A == doctest::Approx(0.0));
    CHECK(c.B == doctest::Approx(1.0));
    for (std::size_t i = 0; i < path.size(); ++i) {
        CHECK(path.positions[i] == doctest::Approx(std::sin(path.times[i])).epsilon(1e-14));
    }
    const auto [zero, cz] = ho_trajectory(PhysicalParams::natural(1e-2, 1.0), 0.0, 0.0, 1.0, 64);
    for (double q : zero.positions) CHECK(q == 0.0);
    CHECK(cz.A == 0.0);
    CHECK(cz.B == 0.0);
    CHECK(cz.F == 0.0);
    CHECK(cz.H == 0.0);
    CHECK_THROWS_AS(ho_trajectory(p, 0.0, 1.0, kPi, 64), CausticError);
}

TEST_CASE("oscillator trajectory meets its boundary values at order beta") {
    oracle::Sampler s(9);
    for (int i = 0; i < 30; ++i) {
        PhysicalParams p{s.uniform(0.5, 2.0), 1.0, s.log_uniform(1e-5, 1e-2), s.uniform(0.3, 2.0), 0.0};
        const double q0 = s.uniform(-1, 1), qf = s.uniform(-1, 1), T = s.uniform(0.2, 2.5);
        if (std::abs(std::sin(p.omega * T)) < 0.1) continue;
        const auto [path, c] = ho_trajectory(p, q0, qf, T, 65);
        CHECK(std::abs(path.positions.front() - q0) < 1e-12);
        CHECK(std::abs(path.positions.back() - qf) < 1e-12);
        CHECK(ho_position(p, c, 0.0) == doctest::Approx(q0));
    }
}

TEST_CASE("oscillator trajectory tends to the straight line as omega T -> 0") {
    const auto p = PhysicalParams::natural(0.0, 1e-3);
    const auto [path, c] = ho_trajectory(p, 0.2, 1.0, 1.0, 101);
    const auto line = free_path(0.2, 1.0, 1.0, 101);
    for (std::size_t i = 0; i < path.size(); ++i) {
        CHECK(std::abs(path.positions[i] - line.positions[i]) < 1e-6);
    }
}

TEST_CASE("equation-of-motion residuals") {
    const auto line = free_path(0.0, 1.0, 1.0, 512);
    CHECK(eom_residual(PhysicalParams::natural(1e-3), line) < 1e-8);
    const auto p = PhysicalParams::natural(0.0, 1.0);
    CHECK(eom_residual(p, ho_trajectory(p, 0.0, 1.0, 1.0, 512).first) < 1e-8);
    CHECK_THROWS_AS(eom_residual(p, free_path(0.0, 1.0, 1.0, 63)), MeshTooCoarse);

    std::vector<double> betas{1e-4, 1e-3, 1e-2};
    std::vector<double> res;
    for (double b : betas) {
        const auto q = PhysicalParams::natural(b, 1.0);
        res.push_back(eom_residual(q, ho_trajectory(q, 0.0, 1.0, 1.0, 512).first));
    }
    CHECK(oracle::loglog_slope(betas, res) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("beta^0 oscillator action by quadrature") {
    const auto p = PhysicalParams::natural(0.0, 1.0);
    const auto ho = PotentialSpec::harmonic(1.0);
    const auto a = action_quadrature(p, ho_trajectory(p, 0.0, 1.0, kPi / 2, 513).first, ho,
                                     LagrangianOrder::Beta1);
    CHECK(std::abs(a.s0) < 1e-10);
    const auto b = action_quadrature(p, ho_trajectory(p, 0.4, -0.9, 1.1, 513).first, ho,
                                     LagrangianOrder::Beta1);
    CHECK(b.s0 == doctest::Approx(ho_action_beta0(p, 0.4, -0.9, 1.1)).epsilon(1e-10));
}

TEST_CASE("beta coefficient of the oscillator action against Gauss-Legendre") {
    for (auto [q0, qf, T] : {std::tuple{0.0, 1.0, kPi / 2}, std::tuple{0.5, -0.3, 1.0}, std::tuple{1.0, 1.0, 2.0}}) {
        const auto p = PhysicalParams::natural(0.0, 1.0);
        const double ref = oracle::ho_action_beta1(1.0, 1.0, q0, qf, T);
        const auto est = ho_action_beta1_quadrature(p, q0, qf, T);
        CHECK(est.value == doctest::Approx(ref).epsilon(1e-6));
    }
    CHECK(oracle::ho_action_beta1(1.0, 1.0, 0.0, 1.0, kPi / 2) == doctest::Approx(-3 * kPi / 16));
}

TEST_CASE("action is stationary along the classical path") {
    const auto ho = PotentialSpec::harmonic(1.0);
    const double T = 1.0;
    const auto linear_term = [&](const PhysicalParams& p, int k) {
        const auto base = ho_trajectory(p, 0.0, 1.0, T, 1025).first;
        auto shifted = [&](double eps) {
            ClassicalPath q = base;
            for (std::size_t i = 0; i < q.size(); ++i) {
                q.positions[i] += eps * std::sin(kPi * k * q.times[i] / T);
            }
            return action_quadrature(p, q, ho, LagrangianOrder::Beta1).total();
        };
        const double eps = 1e-3;
        return (shifted(eps) - shifted(-eps)) / (2 * eps);
    };
    for (int k : {1, 2, 3}) {
        CHECK(std::abs(linear_term(PhysicalParams::natural(0.0, 1.0), k)) < 1e-9);
        const double a = std::abs(linear_term(PhysicalParams::natural(1e-3, 1.0), k));
        const double b = std::abs(linear_term(PhysicalParams::natural(1e-2, 1.0), k));
        CHECK(std::log(b / a) / std::log(10.0) == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("mesh guards") {
    const auto p = PhysicalParams::natural(0.0, 1.0);
    CHECK_THROWS_AS(action_quadrature(p, free_path(0, 1, 1, 10), kFree, LagrangianOrder::Beta1), MeshTooCoarse);
    CHECK_THROWS_AS(differentiate(free_path(0, 1, 1, 10)), MeshTooCoarse);
}
