#pragma once

#include "symplectic.hpp"

#include <limits>
#include <set>

namespace squeezeopt {

struct GaussianState {
    CovarianceMatrix gamma;
    Vector displacement;  // J basis, length 2n
};

/// Projection of one mode onto diag(1/d, d); d = infinity is homodyne
/// detection of the q quadrature.
struct MeasurementSpec {
    int mode = 0;
    double squeeze = std::numeric_limits<double>::infinity();

    static MeasurementSpec homodyne(int mode) { return {mode, std::numeric_limits<double>::infinity()}; }
    bool is_homodyne() const { return std::isinf(squeeze); }
};

namespace detail {

/// J-basis indices of the given modes: all q's, then all p's.
inline std::vector<int> mode_indices(const std::vector<int>& modes, int n) {
    std::vector<int> idx;
    idx.reserve(2 * modes.size());
    for (int m : modes) idx.push_back(m);
    for (int m : modes) idx.push_back(n + m);
    return idx;
}

inline Matrix submatrix(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

}  // namespace detail

/// gamma1 (+) gamma2 with the modes of gamma2 appended after those of gamma1.
inline CovarianceMatrix direct_sum(const CovarianceMatrix& g1, const CovarianceMatrix& g2) {
    const int n1 = g1.modes(), n2 = g2.modes(), n = n1 + n2;
    Matrix out = Matrix::Zero(2 * n, 2 * n);
    std::vector<int> first(n1), second(n2);
    for (int i = 0; i < n1; ++i) first[i] = i;
    for (int i = 0; i < n2; ++i) second[i] = n1 + i;
    const auto i1 = detail::mode_indices(first, n);
    const auto i2 = detail::mode_indices(second, n);
    for (int a = 0; a < 2 * n1; ++a)
        for (int b = 0; b < 2 * n1; ++b) out(i1[a], i1[b]) = g1.j()(a, b);
    for (int a = 0; a < 2 * n2; ++a)
        for (int b = 0; b < 2 * n2; ++b) out(i2[a], i2[b]) = g2.j()(a, b);
    return CovarianceMatrix(out);
}

inline CovarianceMatrix add_noise(const CovarianceMatrix& g, const Matrix& noise) {
    if (noise.rows() != g.dim() || noise.cols() != g.dim()) throw Error("noise has wrong dimension");
    if (sym_eig(noise).values[0] < -1e-10) throw Error("noise matrix is not positive semidefinite");
    return CovarianceMatrix(g.j() + symmetrized(noise));
}

inline CovarianceMatrix conjugate(const CovarianceMatrix& g, const Matrix& s) {
    const double scale = std::max(1.0, max_abs(s) * max_abs(s));
    if (s.rows() != g.dim() || !is_symplectic(s, tol::recon * scale)) throw Error("conjugate: matrix is not symplectic");
    return CovarianceMatrix(symmetrized(s.transpose() * g.j() * s));
}

/// Selective Gaussian measurement of one mode: A - C (B + g_G)^{-1} C^T for
/// g_G = diag(1/d, d), and A - C (pi B pi)^{MP} C^T with pi = diag(1, 0) for
/// homodyne detection.
inline CovarianceMatrix measure_gaussian(const CovarianceMatrix& g, const MeasurementSpec& spec) {
    const int n = g.modes();
    if (spec.mode < 0 || spec.mode >= n) throw Error("measured mode out of range");
    if (n < 2) throw Error("measuring the only mode leaves nothing");
    if (!(spec.squeeze > 0.0)) throw Error("measurement squeezing must be positive");

    std::vector<int> rest;
    for (int m = 0; m < n; ++m)
        if (m != spec.mode) rest.push_back(m);
    const auto keep = detail::mode_indices(rest, n);
    const std::vector<int> probe{spec.mode, n + spec.mode};

    const Matrix a = detail::submatrix(g.j(), keep, keep);
    const Matrix c = detail::submatrix(g.j(), keep, probe);
    const Matrix b = detail::submatrix(g.j(), probe, probe);

    Eigen::Matrix2d pinv = Eigen::Matrix2d::Zero();
    if (spec.is_homodyne()) {
        if (b(0, 0) > 1e-12) pinv(0, 0) = 1.0 / b(0, 0);
    } else {
        Eigen::Matrix2d m = b;
        m(0, 0) += 1.0 / spec.squeeze;
        m(1, 1) += spec.squeeze;
        pinv = m.inverse();
    }
    return CovarianceMatrix(symmetrized(a - c * pinv * c.transpose()));
}

/// Principal submatrix on the kept modes (in the given order).
inline CovarianceMatrix partial_trace(const CovarianceMatrix& g, const std::vector<int>& keep) {
    if (keep.empty()) throw Error("partial_trace: nothing to keep");
    std::set<int> seen;
    for (int m : keep)
        if (m < 0 || m >= g.modes() || !seen.insert(m).second) throw Error("partial_trace: bad mode index");
    const auto idx = detail::mode_indices(keep, g.modes());
    return CovarianceMatrix(detail::submatrix(g.j(), idx, idx));
}

/// Covariance of the mixture l*rho1 + (1-l)*rho2, including the rank-one
/// spread of the displacements.
inline GaussianState mix(const GaussianState& s1, const GaussianState& s2, double l) {
    if (!(l >= 0.0 && l <= 1.0)) throw Error("mixing weight must lie in [0, 1]");
    if (s1.gamma.dim() != s2.gamma.dim() || s1.displacement.size() != s1.gamma.dim() ||
        s2.displacement.size() != s2.gamma.dim())
        throw Error("mix: dimension mismatch");
    const Vector dd = s1.displacement - s2.displacement;
    const Matrix cov = l * s1.gamma.j() + (1.0 - l) * s2.gamma.j() + 2.0 * l * (1.0 - l) * dd * dd.transpose();
    return {CovarianceMatrix(symmetrized(cov)), l * s1.displacement + (1.0 - l) * s2.displacement};
}

/// Angle phi of the three-mode family: tan phi = e^{-2r} sinh 2d + sqrt(1 + e^{-4r} sinh^2 2d).
inline double mista_korolkova_phi(double r, double d) {
    const double a = std::exp(-2.0 * r) * std::sinh(2.0 * d);
    return std::atan(a + std::sqrt(1.0 + a * a));
}

inline void check_mk_domain(double r, double d) {
    if (!(r > 0.0) || !(d >= r)) throw Error("three-mode state needs d >= r > 0");
}

/// Smallest noise weight at which the three-mode state is fully separable.
inline double x_sep(double r, double d) {
    check_mk_domain(r, d);
    const double phi = mista_korolkova_phi(r, d);
    const double sn = std::sin(phi), cs = std::cos(phi);
    return 2.0 * std::sinh(2.0 * r) / (std::exp(2.0 * d) * sn * sn + std::exp(-2.0 * d) * cs * cs);
}

/// gamma_AB (+) 1_C + x (q1 q1^T + q2 q2^T), built in the Sigma basis with
/// q1 = (0, sin phi, 0, -sin phi, sqrt2, sqrt2), q2 = (cos phi, 0, cos phi, 0, sqrt2, sqrt2).
inline CovarianceMatrix mista_korolkova(double r, double d, double x) {
    check_mk_domain(r, d);
    if (!(x >= 0.0)) throw Error("noise weight x must be nonnegative");
    const double a = std::cosh(2.0 * r), c = std::sinh(2.0 * r);
    const double up = std::exp(2.0 * d), dn = std::exp(-2.0 * d);
    Matrix g = Matrix::Identity(6, 6);
    g.topLeftCorner(4, 4) << up * a, 0, -up * c, 0,  //
        0, dn * a, 0, dn * c,                        //
        -up * c, 0, up * a, 0,                       //
        0, dn * c, 0, dn * a;
    const double phi = mista_korolkova_phi(r, d);
    const double s2 = std::sqrt(2.0);
    Vector q1(6), q2(6);
    q1 << 0, std::sin(phi), 0, -std::sin(phi), s2, s2;
    q2 << std::cos(phi), 0, std::cos(phi), 0, s2, s2;
    g += x * (q1 * q1.transpose() + q2 * q2.transpose());
    return CovarianceMatrix(g, Basis::Sigma);
}

}  // namespace squeezeopt
