#pragma once

#include "symplectic.hpp"

namespace squeezeopt {

/// Pair of real symmetric n x n blocks; stands for H = [[A, B], [B, -A]].
struct HPoint {
    Matrix A;
    Matrix B;

    static HPoint zero(int n) { return {Matrix::Zero(n, n), Matrix::Zero(n, n)}; }
    int modes() const { return static_cast<int>(A.rows()); }
};

inline Matrix embed(const HPoint& h) {
    const int n = h.modes();
    if (h.B.rows() != n || h.A.cols() != n || h.B.cols() != n) throw Error("HPoint blocks have mismatched shapes");
    Matrix out(2 * n, 2 * n);
    out << h.A, h.B, h.B, -h.A;
    return out;
}

/// Eigenvalues of embed(H), descending. They come in +- pairs.
inline Vector embedded_spectrum(const HPoint& h) { return sym_eig(embed(h)).values.reverse(); }

/// s_i(A + iB), i = 1..n, decreasing: the top half of the spectrum of embed(H).
inline Vector top_singular_values(const HPoint& h) {
    const Vector spec = embedded_spectrum(h);
    return spec.head(h.modes()).cwiseMax(0.0);
}

/// Number of free parameters of an HPoint on n modes.
inline int param_count(int n) { return n * (n + 1); }

/// Layout: A diagonal, A strict upper triangle row-major, then the same for B.
/// Off-diagonal slots carry the shared value of both symmetric entries.
inline HPoint params_to_H(const Vector& x, int n) {
    if (n < 1 || x.size() != param_count(n)) throw Error("parameter vector has wrong length");
    HPoint h = HPoint::zero(n);
    Eigen::Index p = 0;
    for (Matrix* block : {&h.A, &h.B}) {
        for (int i = 0; i < n; ++i) (*block)(i, i) = x[p++];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                (*block)(i, j) = x[p];
                (*block)(j, i) = x[p];
                ++p;
            }
    }
    return h;
}

inline Vector H_to_params(const HPoint& h) {
    const int n = h.modes();
    Vector x(param_count(n));
    Eigen::Index p = 0;
    for (const Matrix* block : {&h.A, &h.B}) {
        for (int i = 0; i < n; ++i) x[p++] = (*block)(i, i);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) x[p++] = (*block)(i, j);
    }
    return x;
}

/// Directional derivative v^T (d embed(H) / d x_p) v for every parameter p.
/// With v = (a; b): an A-slot contributes a^T E a - b^T E b, a B-slot 2 a^T E b.
inline Vector embed_quadratic_gradient(const Vector& v, int n) {
    const auto a = v.head(n);
    const auto b = v.tail(n);
    Vector g(param_count(n));
    Eigen::Index p = 0;
    for (int i = 0; i < n; ++i) g[p++] = a[i] * a[i] - b[i] * b[i];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g[p++] = 2.0 * (a[i] * a[j] - b[i] * b[j]);
    for (int i = 0; i < n; ++i) g[p++] = 2.0 * a[i] * b[i];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g[p++] = 2.0 * (a[i] * b[j] + a[j] * b[i]);
    return g;
}

/// (1 + H)(1 - H)^{-1}, symmetrized.
inline Matrix cayley_matrix(const Matrix& h) {
    const auto dim = h.rows();
    const Matrix id = Matrix::Identity(dim, dim);
    Eigen::PartialPivLU<Matrix> lu(id - h);
    if (!(std::abs(lu.determinant()) > 0.0) || !std::isfinite(lu.determinant()))
        throw Error("Cayley transform undefined: 1 - H is singular");
    // (1-H)^{-1}(1+H) equals (1+H)(1-H)^{-1} since the factors commute
    return symmetrized(lu.solve(id + h));
}

inline Matrix cayley(const HPoint& h) { return cayley_matrix(embed(h)); }

/// (S - 1)(S + 1)^{-1} for any symmetric S without eigenvalue -1.
inline Matrix inverse_cayley_matrix(const Matrix& s) {
    const auto dim = s.rows();
    const Matrix id = Matrix::Identity(dim, dim);
    Eigen::PartialPivLU<Matrix> lu(s + id);
    if (!(std::abs(lu.determinant()) > 0.0) || !std::isfinite(lu.determinant()))
        throw Error("inverse Cayley transform undefined: S + 1 is singular");
    return symmetrized(lu.solve(s - id));
}

/// Deviation of a 2n x 2n matrix from the [[A, B], [B, -A]] pattern.
inline double structure_residual(const Matrix& m) {
    const int n = mode_count_of(m);
    const double r1 = max_abs(m.bottomRightCorner(n, n) + m.topLeftCorner(n, n));
    const double r2 = max_abs(m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
    return std::max(r1, r2);
}

/// Projects a matrix with the pi(n) block pattern onto an HPoint.
inline HPoint block_pattern_to_H(const Matrix& m) {
    const int n = mode_count_of(m);
    HPoint h;
    h.A = symmetrized(0.5 * (m.topLeftCorner(n, n) - m.bottomRightCorner(n, n)));
    h.B = symmetrized(0.5 * (m.topRightCorner(n, n) + m.bottomLeftCorner(n, n)));
    return h;
}

/// Inverse Cayley transform of a symmetric symplectic matrix. Throws when the
/// result does not have the pi(n) block pattern, which means S was not
/// symplectic.
inline HPoint inverse_cayley(const Matrix& s, double struct_tol = tol::structure) {
    const Matrix m = inverse_cayley_matrix(s);
    if (structure_residual(m) > struct_tol) throw Error("inverse Cayley image lacks [[A,B],[B,-A]] structure");
    return block_pattern_to_H(m);
}

/// Membership in the Cayley domain: lambda_max(embed(H)) < 1 - margin.
/// By the +- pairing this also bounds the spectrum from below.
inline bool in_H(const HPoint& h, double margin = 0.0) { return embedded_spectrum(h)[0] < 1.0 - margin; }

}  // namespace squeezeopt
