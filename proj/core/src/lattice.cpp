#include "lattice.hpp"

#include <unsupported/Eigen/FFT>

namespace gupqm::detail {

Eigen::VectorXcd fft(const Eigen::VectorXcd& x) {
    Eigen::FFT<double> engine;
    Eigen::VectorXcd out(x.size());
    engine.fwd(out, x);
    return out;
}

Eigen::VectorXcd ifft(const Eigen::VectorXcd& x) {
    Eigen::FFT<double> engine;
    Eigen::VectorXcd out(x.size());
    engine.inv(out, x);
    return out;
}

Eigen::VectorXcd circulant_column(const Eigen::VectorXcd& symbol) { return ifft(symbol); }

Eigen::MatrixXcd circulant_matrix(const Eigen::VectorXcd& column) {
    const Eigen::Index n = column.size();
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = column((i - j + n) % n);
    }
    return m;
}

Eigen::MatrixXd circulant_matrix(const Eigen::VectorXd& column) {
    const Eigen::Index n = column.size();
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = column((i - j + n) % n);
    }
    return m;
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& m, std::size_t n) {
    Eigen::MatrixXcd result;
    Eigen::MatrixXcd base = m;
    bool have_result = false;
    while (n > 0) {
        if (n & 1U) {
            if (have_result) {
                Eigen::MatrixXcd next;
                next.noalias() = result * base;
                result.swap(next);
            } else {
                result = base;
                have_result = true;
            }
        }
        n >>= 1U;
        if (n > 0) {
            Eigen::MatrixXcd sq;
            sq.noalias() = base * base;
            base.swap(sq);
        }
    }
    if (!have_result) return Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return result;
}

}  // namespace gupqm::detail
