#include "gupqm/potential.hpp"

#include <algorithm>
#include <cmath>

#include "gupqm/errors.hpp"

namespace gupqm {

std::string_view to_string(PotentialSpec::Kind k) {
    switch (k) {
        case PotentialSpec::Kind::Free: return "free";
        case PotentialSpec::Kind::Harmonic: return "harmonic";
        case PotentialSpec::Kind::Tabulated: return "tabulated";
    }
    return "unknown";
}

PotentialSpec PotentialSpec::harmonic(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("potential: harmonic requires omega > 0");
    }
    return PotentialSpec(Kind::Harmonic, omega, {}, {});
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> abscissae, std::vector<double> values) {
    if (abscissae.size() != values.size() || abscissae.size() < 2) {
        throw InvalidArgument("potential: need >= 2 (x, V) samples of equal length");
    }
    for (std::size_t i = 0; i < abscissae.size(); ++i) {
        if (!std::isfinite(abscissae[i]) || !std::isfinite(values[i])) {
            throw InvalidArgument("potential: non-finite sample");
        }
        if (i > 0 && !(abscissae[i] > abscissae[i - 1])) {
            throw InvalidArgument("potential: abscissae must be strictly increasing");
        }
    }
    return PotentialSpec(Kind::Tabulated, 0.0, std::move(abscissae), std::move(values));
}

PotentialSpec PotentialSpec::sampled_on(const SpatialGrid& grid, const std::vector<double>& values) {
    if (values.size() != grid.size()) throw InvalidArgument("potential: one sample per grid node");
    std::vector<double> x(grid.size() + 1);
    std::vector<double> v(grid.size() + 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        x[i] = grid.position(i);
        v[i] = values[i];
    }
    // periodic closure
    x.back() = grid.q_max();
    v.back() = values.front();
    return tabulated(std::move(x), std::move(v));
}

double PotentialSpec::operator()(double q, double mass) const {
    switch (kind_) {
        case Kind::Free: return 0.0;
        case Kind::Harmonic: return 0.5 * mass * omega_ * omega_ * q * q;
        case Kind::Tabulated: {
            if (q <= x_.front()) return v_.front();
            if (q >= x_.back()) return v_.back();
            const auto it = std::upper_bound(x_.begin(), x_.end(), q);
            const auto i = static_cast<std::size_t>(it - x_.begin());
            const double t = (q - x_[i - 1]) / (x_[i] - x_[i - 1]);
            return (1.0 - t) * v_[i - 1] + t * v_[i];
        }
    }
    return 0.0;
}

Eigen::VectorXd PotentialSpec::on_grid(const SpatialGrid& grid, double mass) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = (*this)(grid.position(i), mass);
    }
    return v;
}

bool PotentialSpec::covers(const SpatialGrid& grid) const {
    if (kind_ != Kind::Tabulated) return true;
    return x_.front() <= grid.q_min() && x_.back() >= grid.q_max();
}

}  // namespace gupqm
