#include "oracles.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace oracle {

complex exact_free_propagator(double m, double hbar, double beta, double delta, double T) {
    const complex rot = std::polar(1.0, -kPi / 8.0);
    const complex i(0.0, 1.0);
    // Integrand decays at least like exp(-0.35 r^2 T / (2 m hbar)).
    const double r_max = 12.0 * std::sqrt(2.0 * m * hbar / T) + 4.0 * std::abs(delta) * m / T;
    const double h = 2e-3 * std::sqrt(m * hbar / T);
    const int n = static_cast<int>(std::ceil(r_max / h));
    complex sum = 0.0;
    for (int k = -n; k <= n; ++k) {
        const complex p = rot * (h * k);
        const complex p2 = p * p;
        const complex energy = p2 / (2.0 * m) + beta * p2 * p2 / m;
        sum += std::exp(i * (p * delta - energy * T) / hbar);
    }
    return sum * h * rot / (2.0 * kPi * hbar);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        nodes[static_cast<std::size_t>(i)] = x;
        weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

double ho_action_beta1(double m, double omega, double q0, double qf, double T) {
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre(32, x, w);
    const double s = std::sin(omega * T);
    const auto velocity = [&](double t) {
        return omega * (-q0 * std::cos(omega * (T - t)) + qf * std::cos(omega * t)) / s;
    };
    const int panels = 16;
    const double hp = T / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = k * hp;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double t = a + 0.5 * hp * (x[j] + 1.0);
            const double v = velocity(t);
            total += 0.5 * hp * w[j] * v * v * v * v;
        }
    }
    return -m * m * m * total;
}

double p4_element(double m, double hbar, double omega, int n, int k) {
    using State = std::map<int, complex>;
    const double s = std::sqrt(m * hbar * omega / 2.0);
    const auto apply_p = [&](const State& in) {
        State out;
        for (const auto& [level, amp] : in) {
            // p = i s (a^dagger - a)
            out[level + 1] += complex(0.0, s) * std::sqrt(level + 1.0) * amp;
            if (level > 0) out[level - 1] -= complex(0.0, s) * std::sqrt(static_cast<double>(level)) * amp;
        }
        return out;
    };
    State psi{{k, 1.0}};
    for (int i = 0; i < 4; ++i) psi = apply_p(psi);
    const auto it = psi.find(n);
    return it == psi.end() ? 0.0 : it->second.real();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope: need >= 2 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double Sampler::log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

}  // namespace oracle
