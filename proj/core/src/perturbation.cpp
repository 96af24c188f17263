#include "gupqm/perturbation.hpp"

#include <cmath>
#include <sstream>

#include "gupqm/errors.hpp"

namespace gupqm {

namespace {

constexpr complex kI{0.0, 1.0};

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_level(const OscillatorBasis& basis, std::size_t level) {
    if (level > basis.safe_band()) {
        std::ostringstream msg;
        msg << "level " << level << " lies in the truncation band of an N = " << basis.dimension()
            << " basis (safe levels <= " << basis.safe_band() << ")";
        throw TruncationError(msg.str());
    }
}

Eigen::MatrixXcd p4(const OscillatorBasis& basis) {
    const Eigen::MatrixXcd p = basis.momentum();
    const Eigen::MatrixXcd p2 = p * p;
    return p2 * p2;
}

}  // namespace

OscillatorBasis::OscillatorBasis(std::size_t n, const PhysicalParams& params)
    : n_(n), params_(params), a_(Eigen::MatrixXcd::Zero(idx(n), idx(n))) {
    for (std::size_t k = 1; k < n; ++k) a_(idx(k - 1), idx(k)) = std::sqrt(static_cast<double>(k));
    adag_ = a_.adjoint();
}

OscillatorBasis OscillatorBasis::create(std::size_t dimension, const PhysicalParams& params) {
    if (dimension < 8) throw InvalidArgument("oscillator basis: dimension must be >= 8");
    require_valid(params);
    if (!(params.omega > 0.0)) throw InvalidArgument("oscillator basis: omega must be > 0");
    return OscillatorBasis(dimension, params);
}

Eigen::MatrixXcd OscillatorBasis::position() const {
    const double s = std::sqrt(params_.hbar / (2.0 * params_.mass * params_.omega));
    return s * (a_ + adag_);
}

Eigen::MatrixXcd OscillatorBasis::momentum() const {
    const double s = std::sqrt(params_.mass * params_.hbar * params_.omega / 2.0);
    return (kI * s) * (adag_ - a_);
}

Eigen::MatrixXcd OscillatorBasis::hamiltonian0() const {
    const Eigen::MatrixXcd q = position();
    const Eigen::MatrixXcd p = momentum();
    const double m = params_.mass;
    const double w = params_.omega;
    return (p * p) / (2.0 * m) + (0.5 * m * w * w) * (q * q);
}

double OscillatorBasis::commutator_defect() const {
    const Eigen::MatrixXcd c = a_ * adag_ - adag_ * a_;
    const Eigen::Index band = idx(n_ - 2);
    return (c.topLeftCorner(band, band) - Eigen::MatrixXcd::Identity(band, band)).cwiseAbs().maxCoeff();
}

double p4_matrix_element(const OscillatorBasis& basis, std::size_t n, std::size_t k) {
    require_level(basis, n);
    require_level(basis, k);
    return p4(basis)(idx(n), idx(k)).real();
}

double first_order_correction(const OscillatorBasis& basis, const PhysicalParams& params,
                              std::size_t n) {
    return params.beta / params.mass * p4_matrix_element(basis, n, n);
}

double h1_decomposition_check(const OscillatorBasis& basis, const PhysicalParams& params) {
    if (basis.dimension() < 16) throw InvalidArgument("h1 decomposition: basis dimension must be >= 16");
    const double m = params.mass;
    const double w = params.omega;
    const double hb = params.hbar;
    const double b = params.beta;
    const auto n = idx(basis.dimension());

    const Eigen::MatrixXcd q = basis.position();
    const Eigen::MatrixXcd p = basis.momentum();
    const Eigen::MatrixXcd h0 = basis.hamiltonian0();
    const Eigen::MatrixXcd q2 = q * q;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);

    const Eigen::MatrixXcd lhs = (b / m) * p4(basis);
    const Eigen::MatrixXcd bracket = h0 * h0 + (m * m * w * w * w * w / 4.0) * (q2 * q2) +
                                     (kI * hb * w * w / 2.0) * (2.0 * q * p - kI * hb * id) -
                                     (m * w * w) * (q2 * h0);
    const Eigen::MatrixXcd rhs = (4.0 * b * m) * bracket;

    const auto band = idx(basis.safe_band() + 1);
    const double scale = lhs.topLeftCorner(band, band).cwiseAbs().maxCoeff();
    const double diff = (lhs - rhs).topLeftCorner(band, band).cwiseAbs().maxCoeff();
    return scale > 0.0 ? diff / scale : diff;
}

H1GroundTerms h1_ground_terms(const OscillatorBasis& basis, const PhysicalParams& params) {
    const double m = params.mass;
    const double w = params.omega;
    const double hb = params.hbar;
    const auto n = idx(basis.dimension());

    const Eigen::MatrixXcd q = basis.position();
    const Eigen::MatrixXcd p = basis.momentum();
    const Eigen::MatrixXcd h0 = basis.hamiltonian0();
    const Eigen::MatrixXcd q2 = q * q;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);

    H1GroundTerms t;
    t.h0_squared = (h0 * h0)(0, 0).real();
    t.q4 = (m * m * w * w * w * w / 4.0) * (q2 * q2)(0, 0).real();
    t.qp = ((kI * hb * w * w / 2.0) * (2.0 * q * p - kI * hb * id))(0, 0).real();
    t.q2h0 = -(m * w * w) * (q2 * h0)(0, 0).real();
    t.bracket = t.h0_squared + t.q4 + t.qp + t.q2h0;
    t.h1 = 4.0 * params.beta * m * t.bracket;
    return t;
}

}  // namespace gupqm
