#pragma once

#include "cayley.hpp"

#include <random>

namespace squeezeopt::random {

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Rng& rng, int rows, int cols) {
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
    return m;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Haar-ish orthogonal symplectic matrix [[X, -Y], [Y, X]] from a random
/// unitary X + iY.
inline Matrix orthogonal_symplectic(Rng& rng, int n) {
    Eigen::MatrixXcd z(n, n);
    const Matrix re = gaussian_matrix(rng, n, n);
    const Matrix im = gaussian_matrix(rng, n, n);
    z.real() = re;
    z.imag() = im;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    const Eigen::MatrixXcd u = qr.householderQ();
    Matrix k(2 * n, 2 * n);
    k << u.real(), -u.imag(), u.imag(), u.real();
    return k;
}

/// diag(e^r, e^-r) per mode in the J basis.
inline Matrix squeezer(const Vector& r) {
    const auto n = r.size();
    Vector d(2 * n);
    d << r.array().exp().matrix(), (-r.array()).exp().matrix();
    return d.asDiagonal();
}

/// K1 Z K2 with squeezing parameters uniform in [0, max_squeeze].
inline Matrix symplectic(Rng& rng, int n, double max_squeeze = 1.0) {
    Vector r(n);
    for (int i = 0; i < n; ++i) r[i] = uniform(rng, 0.0, max_squeeze);
    return orthogonal_symplectic(rng, n) * squeezer(r) * orthogonal_symplectic(rng, n);
}

/// S^T D S with symplectic eigenvalues drawn from [1, 1 + max_excess].
inline CovarianceMatrix valid_covariance(Rng& rng, int n, double max_squeeze = 1.0, double max_excess = 2.0) {
    const Matrix s = symplectic(rng, n, max_squeeze);
    Vector d(2 * n);
    for (int i = 0; i < n; ++i) d[i] = d[n + i] = 1.0 + uniform(rng, 0.0, max_excess);
    return CovarianceMatrix(symmetrized(s.transpose() * d.asDiagonal() * s));
}

inline CovarianceMatrix pure_covariance(Rng& rng, int n, double max_squeeze = 1.0) {
    const Matrix s = symplectic(rng, n, max_squeeze);
    return CovarianceMatrix(symmetrized(s.transpose() * s));
}

/// Single-mode O diag(l1, l2) O^T with l1 * l2 >= 1.
inline CovarianceMatrix single_mode_covariance(Rng& rng, double max_log = 1.5) {
    const double lo = std::exp(uniform(rng, -max_log, max_log));
    const double hi = std::max(1.0 / lo, lo) * std::exp(uniform(rng, 0.0, 1.0));
    const double th = uniform(rng, 0.0, 3.141592653589793);
    Eigen::Matrix2d o;
    o << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Eigen::Matrix2d d = Eigen::Vector2d(hi, lo).asDiagonal();
    return CovarianceMatrix(Matrix(o * d * o.transpose()));
}

/// Random HPoint whose embedded spectrum lies inside (-radius, radius).
inline HPoint h_point(Rng& rng, int n, double radius = 0.9) {
    HPoint h{symmetrized(gaussian_matrix(rng, n, n)), symmetrized(gaussian_matrix(rng, n, n))};
    const double top = embedded_spectrum(h)[0];
    const double scale = radius * uniform(rng, 0.2, 1.0) / std::max(top, 1e-12);
    h.A *= scale;
    h.B *= scale;
    return h;
}

}  // namespace squeezeopt::random
