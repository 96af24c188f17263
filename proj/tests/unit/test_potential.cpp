#include <doctest.h>

#include "gupqm/errors.hpp"
#include "gupqm/potential.hpp"

using namespace gupqm;

TEST_CASE("free and harmonic potentials") {
    CHECK(PotentialSpec::free()(3.0, 2.0) == 0.0);
    const auto h = PotentialSpec::harmonic(2.0);
    CHECK(h(1.5, 3.0) == doctest::Approx(0.5 * 3.0 * 4.0 * 2.25));
    CHECK(h.kind() == PotentialSpec::Kind::Harmonic);
    CHECK_THROWS_AS(PotentialSpec::harmonic(0.0), InvalidArgument);
    CHECK_THROWS_AS(PotentialSpec::harmonic(-1.0), InvalidArgument);
}

TEST_CASE("tabulated potentials interpolate linearly and clamp") {
    const auto t = PotentialSpec::tabulated({0.0, 1.0, 3.0}, {0.0, 2.0, -2.0});
    CHECK(t(0.5, 1.0) == doctest::Approx(1.0));
    CHECK(t(2.0, 1.0) == doctest::Approx(0.0));
    CHECK(t(-5.0, 1.0) == 0.0);
    CHECK(t(9.0, 1.0) == -2.0);
    CHECK_THROWS_AS(PotentialSpec::tabulated({0.0, 0.0}, {1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(PotentialSpec::tabulated({1.0, 0.0}, {1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(PotentialSpec::tabulated({0.0}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(PotentialSpec::tabulated({0.0, NAN}, {1.0, 1.0}), InvalidArgument);
}

TEST_CASE("coverage of the working interval") {
    const auto g = SpatialGrid::centered(4.0, 16);
    CHECK(PotentialSpec::tabulated({-2.0, 2.0}, {0.0, 0.0}).covers(g));
    CHECK_FALSE(PotentialSpec::tabulated({-1.0, 2.0}, {0.0, 0.0}).covers(g));
    CHECK(PotentialSpec::free().covers(g));
}

TEST_CASE("sampling on a grid reproduces node values") {
    const auto g = SpatialGrid::centered(4.0, 16);
    std::vector<double> v(16);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i * i);
    const auto s = PotentialSpec::sampled_on(g, v);
    CHECK(s.covers(g));
    const auto on = s.on_grid(g, 1.0);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(on[static_cast<Eigen::Index>(i)] == v[i]);
    CHECK_THROWS_AS(PotentialSpec::sampled_on(g, {1.0, 2.0}), InvalidArgument);
}
