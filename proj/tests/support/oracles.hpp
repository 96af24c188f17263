#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's numerics.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// (1/2 pi hbar) int dp exp(i p D / hbar - i E(p) T / hbar), E = p^2/2m + beta p^4/m,
/// evaluated on the rotated contour p = r exp(-i pi/8) with the trapezoid rule.
complex exact_free_propagator(double m, double hbar, double beta, double delta, double T);

/// n-point Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Coefficient of beta in the oscillator classical action: -m^3 int qdot^4 dt
/// along the beta = 0 path, by composite Gauss-Legendre with the analytic velocity.
double ho_action_beta1(double m, double omega, double q0, double qf, double T);

/// Fourth power of the ladder momentum <n| p^4 |k> by acting with a and
/// a^dagger on explicit state vectors (no truncation).
double p4_element(double m, double hbar, double omega, int n, int k);

/// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Deterministic sampler for property tests.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi);
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle
