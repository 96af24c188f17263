#pragma once

// First-order perturbation theory for H1 = (beta/m) p^4 in a truncated
// oscillator basis. Matrix elements come from explicit ladder-matrix
// products, never from closed-form tables.

#include <cstddef>

#include <Eigen/Dense>

#include "gupqm/model.hpp"

namespace gupqm {

/// Ladder operators a, a^dagger on the first N oscillator levels of (m, omega, hbar).
///
/// Truncation only corrupts products near the top of the basis; levels
/// <= N - 5 (the safe band) are exact for operators up to fourth order.
class OscillatorBasis {
public:
    /// N >= 8, omega > 0.
    static OscillatorBasis create(std::size_t dimension, const PhysicalParams& params);

    std::size_t dimension() const { return n_; }
    const PhysicalParams& params() const { return params_; }
    std::size_t safe_band() const { return n_ - 5; }

    const Eigen::MatrixXcd& lowering() const { return a_; }
    const Eigen::MatrixXcd& raising() const { return adag_; }

    /// sqrt(hbar / 2 m omega) (a + a^dagger).
    Eigen::MatrixXcd position() const;
    /// i sqrt(m hbar omega / 2) (a^dagger - a).
    Eigen::MatrixXcd momentum() const;
    /// p^2/2m + m omega^2 q^2 / 2 from the matrices above.
    Eigen::MatrixXcd hamiltonian0() const;

    /// max |[a, a^dagger] - I| over the first N - 2 levels.
    double commutator_defect() const;

private:
    OscillatorBasis(std::size_t n, const PhysicalParams& params);

    std::size_t n_;
    PhysicalParams params_;
    Eigen::MatrixXcd a_;
    Eigen::MatrixXcd adag_;
};

/// <n| p^4 |k> by matrix products. Throws TruncationError when n or k > N - 5.
double p4_matrix_element(const OscillatorBasis& basis, std::size_t n, std::size_t k);

/// (beta / m) <n| p^4 |n> with beta and m from params.
double first_order_correction(const OscillatorBasis& basis, const PhysicalParams& params,
                              std::size_t n);

/// Builds (beta/m) p^4 and
///   4 beta m [H0^2 + (m^2 omega^4 / 4) q^4 + (i hbar omega^2 / 2)(2 q p - i hbar) - m omega^2 q^2 H0]
/// as N x N matrices and returns max|LHS - RHS| / max|LHS| over the safe
/// band (absolute when LHS vanishes). Requires N >= 16.
double h1_decomposition_check(const OscillatorBasis& basis, const PhysicalParams& params);

/// Ground-state expectation of each bracket term above (without 4 beta m).
struct H1GroundTerms {
    double h0_squared = 0.0;
    double q4 = 0.0;
    double qp = 0.0;
    double q2h0 = 0.0;
    double bracket = 0.0;  // sum of the four
    double h1 = 0.0;       // 4 beta m * bracket
};

H1GroundTerms h1_ground_terms(const OscillatorBasis& basis, const PhysicalParams& params);

}  // namespace gupqm
