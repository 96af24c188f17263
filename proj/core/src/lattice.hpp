#pragma once

// Internal helpers for the periodic lattice: FFT wrappers and circulant
// matrices built from a dispersion in FFT order.

#include <Eigen/Dense>

#include "gupqm/model.hpp"

namespace gupqm::detail {

/// Forward DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
Eigen::VectorXcd fft(const Eigen::VectorXcd& x);

/// Inverse DFT including the 1/n factor.
Eigen::VectorXcd ifft(const Eigen::VectorXcd& x);

/// First column c(d) = (1/n) sum_k f_k exp(2 pi i k d / n) of the circulant
/// operator diagonal in momentum with symbol f (FFT order).
Eigen::VectorXcd circulant_column(const Eigen::VectorXcd& symbol);

/// C_ij = c((i - j) mod n).
Eigen::MatrixXcd circulant_matrix(const Eigen::VectorXcd& column);
Eigen::MatrixXd circulant_matrix(const Eigen::VectorXd& column);

/// M^n by repeated squaring.
Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& m, std::size_t n);

}  // namespace gupqm::detail
