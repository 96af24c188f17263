#pragma once

#include <string_view>
#include <vector>

#include "gupqm/model.hpp"

namespace gupqm {

/// External potential V(q): free, harmonic 1/2 m omega^2 q^2, or linearly
/// interpolated samples.
class PotentialSpec {
public:
    enum class Kind { Free, Harmonic, Tabulated };

    static PotentialSpec free() { return PotentialSpec(Kind::Free, 0.0, {}, {}); }

    /// omega must be > 0.
    static PotentialSpec harmonic(double omega);

    /// Abscissae strictly increasing, at least two samples, all finite.
    static PotentialSpec tabulated(std::vector<double> abscissae, std::vector<double> values);

    /// Tabulated samples of a harmonic or other potential at the grid nodes,
    /// padded by one node past q_max so the whole periodic box is covered.
    static PotentialSpec sampled_on(const SpatialGrid& grid, const std::vector<double>& values);

    Kind kind() const { return kind_; }
    double omega() const { return omega_; }

    /// V(q) for a particle of the given mass. Tabulated potentials are
    /// clamped to their end values outside the sampled range.
    double operator()(double q, double mass) const;

    /// V at every lattice node.
    Eigen::VectorXd on_grid(const SpatialGrid& grid, double mass) const;

    /// Does the tabulation cover [grid.q_min(), grid.q_max()]? Always true
    /// for Free and Harmonic.
    bool covers(const SpatialGrid& grid) const;

private:
    PotentialSpec(Kind kind, double omega, std::vector<double> x, std::vector<double> v)
        : kind_(kind), omega_(omega), x_(std::move(x)), v_(std::move(v)) {}

    Kind kind_;
    double omega_;
    std::vector<double> x_;
    std::vector<double> v_;
};

std::string_view to_string(PotentialSpec::Kind k);

}  // namespace gupqm
