#pragma once

#include "types.hpp"

#include <Eigen/Eigenvalues>

#include <numeric>

namespace squeezeopt {

/// Standard symplectic form: direct sum of [[0,1],[-1,0]] blocks in the
/// Sigma basis, [[0, I],[-I, 0]] in the J basis.
inline Matrix symplectic_form(int n, Basis basis = Basis::J) {
    if (n < 1) throw Error("symplectic form needs at least one mode");
    Matrix omega = Matrix::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        if (basis == Basis::Sigma) {
            omega(2 * k, 2 * k + 1) = 1.0;
            omega(2 * k + 1, 2 * k) = -1.0;
        } else {
            omega(k, n + k) = 1.0;
            omega(n + k, k) = -1.0;
        }
    }
    return omega;
}

inline bool is_symplectic(const Matrix& s, double tolerance, Basis basis = Basis::J) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) return false;
    const Matrix omega = symplectic_form(static_cast<int>(s.rows() / 2), basis);
    return max_abs(s.transpose() * omega * s - omega) <= tolerance;
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
struct SymEig {
    Vector values;
    Matrix vectors;
};

inline SymEig sym_eig(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m));
    if (es.info() != Eigen::Success) throw Error("symmetric eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

template <class Fn>
Matrix spectral_apply(const SymEig& e, Fn fn) {
    Vector mapped = e.values.unaryExpr(fn);
    return symmetrized(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

inline SymEig positive_definite_eig(const Matrix& p, const char* what) {
    SymEig e = sym_eig(p);
    if (!(e.values[0] > 0.0)) throw Error(std::string(what) + " is not positive definite");
    return e;
}

/// Symmetric positive definite square root. Symplectic inputs give
/// symplectic roots.
inline Matrix sym_sqrt(const Matrix& p) {
    return spectral_apply(positive_definite_eig(p, "matrix"), [](double x) { return std::sqrt(x); });
}

inline Matrix sym_inv_sqrt(const Matrix& p) {
    return spectral_apply(positive_definite_eig(p, "matrix"), [](double x) { return 1.0 / std::sqrt(x); });
}

/// Principal logarithm of a symmetric positive definite matrix.
inline Matrix sym_log(const Matrix& p) {
    return spectral_apply(positive_definite_eig(p, "matrix"), [](double x) { return std::log(x); });
}

inline Matrix sym_exp(const Matrix& h) {
    return spectral_apply(sym_eig(h), [](double x) { return std::exp(x); });
}

/// Symplectic spectrum, decreasing. Uses the moduli of the eigenvalues of
/// the antisymmetric matrix G^{1/2} J G^{1/2}, which are +-i d_k.
inline Vector symplectic_eigenvalues(const CovarianceMatrix& gamma) {
    const int n = gamma.modes();
    const Matrix root = spectral_apply(positive_definite_eig(gamma.j(), "covariance matrix"),
                                       [](double x) { return std::sqrt(x); });
    const Matrix a = root * symplectic_form(n) * root;
    Vector sq = sym_eig(a.transpose() * a).values;  // d_k^2, each twice
    Vector d(n);
    for (int k = 0; k < n; ++k) {
        // ascending pairs (2k, 2k+1) -> take their mean for balance
        const double v = 0.5 * (sq[2 * k] + sq[2 * k + 1]);
        d[n - 1 - k] = std::sqrt(std::max(v, 0.0));
    }
    return d;
}

inline bool is_valid_covariance(const CovarianceMatrix& gamma, double tolerance = tol::validity) {
    const SymEig e = sym_eig(gamma.j());
    if (!(e.values[0] > 0.0)) return false;
    return symplectic_eigenvalues(gamma).minCoeff() >= 1.0 - tolerance;
}

/// Gamma = S^T D S with D = diag(d_1..d_n, d_1..d_n) in the J basis.
struct WilliamsonForm {
    Matrix S;
    Matrix D;
    Vector spectrum;  // decreasing

    Matrix reconstruct() const { return S.transpose() * D * S; }
};

/// Williamson normal form from the real Schur form of G^{-1/2} sigma G^{-1/2}:
/// with that form equal to K T K^T, S^T = G^{1/2} K D^{-1/2}.
inline WilliamsonForm williamson(const CovarianceMatrix& gamma) {
    const int n = gamma.modes();
    const Matrix g = gamma.in(Basis::Sigma);
    const SymEig e = positive_definite_eig(g, "covariance matrix");
    const Matrix root = spectral_apply(e, [](double x) { return std::sqrt(x); });
    const Matrix inv_root = spectral_apply(e, [](double x) { return 1.0 / std::sqrt(x); });

    const Matrix w = inv_root * symplectic_form(n, Basis::Sigma) * inv_root;
    Eigen::RealSchur<Matrix> schur(w);
    if (schur.info() != Eigen::Success) throw Error("real Schur decomposition failed");
    Matrix k = schur.matrixU();
    const Matrix t = k.transpose() * w * k;

    // Every eigenvalue of w is imaginary, so the quasi-triangular factor is a
    // chain of 2x2 rotation blocks.
    std::vector<double> rate(n);
    for (int b = 0; b < n; ++b) {
        const int i = 2 * b;
        double tb = 0.5 * (t(i, i + 1) - t(i + 1, i));
        if (tb < 0.0) {
            k.col(i).swap(k.col(i + 1));
            tb = -tb;
        }
        if (!(tb > 0.0)) throw Error("degenerate Schur block in Williamson decomposition");
        rate[b] = tb;
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rate[a] < rate[b]; });

    Matrix k_sorted(2 * n, 2 * n);
    Vector d(n);
    Matrix d_sigma = Matrix::Zero(2 * n, 2 * n);
    for (int b = 0; b < n; ++b) {
        k_sorted.col(2 * b) = k.col(2 * order[b]);
        k_sorted.col(2 * b + 1) = k.col(2 * order[b] + 1);
        d[b] = 1.0 / rate[order[b]];
        d_sigma(2 * b, 2 * b) = d_sigma(2 * b + 1, 2 * b + 1) = d[b];
    }

    Vector inv_sqrt_d(2 * n);
    for (int b = 0; b < n; ++b) inv_sqrt_d[2 * b] = inv_sqrt_d[2 * b + 1] = 1.0 / std::sqrt(d[b]);
    const Matrix s_sigma = (root * k_sorted * inv_sqrt_d.asDiagonal()).transpose();

    return {permute_basis(s_sigma, Basis::Sigma, Basis::J), permute_basis(d_sigma, Basis::Sigma, Basis::J), d};
}

/// S = K * diag(s, 1/s) * Kprime with K, Kprime orthogonal symplectic.
struct EulerForm {
    Matrix K;
    Vector squeeze;  // s_1 >= ... >= s_n >= 1
    Matrix Kprime;

    Matrix Z() const {
        const auto n = squeeze.size();
        Vector diag(2 * n);
        diag << squeeze, squeeze.cwiseInverse();
        return diag.asDiagonal();
    }
    Matrix reconstruct() const { return K * Z() * Kprime; }
};

/// Euler (Bloch-Messiah) decomposition of a symplectic matrix. S^T S is
/// diagonalized by an orthogonal symplectic Q = [X, -J X] built from its
/// eigenvectors; then S = (S Q Z^{-1}) Z Q^T.
inline EulerForm euler(const Matrix& s) {
    const int n = mode_count_of(s);
    const double scale = std::max(1.0, max_abs(s) * max_abs(s));
    if (!is_symplectic(s, tol::recon * scale)) throw Error("matrix is not symplectic");

    const Matrix omega = symplectic_form(n);
    const SymEig e = sym_eig(s.transpose() * s);

    // Greedy selection of n eigenvectors, largest eigenvalue first, that are
    // orthogonal to each other and to their J-images. Only matters inside
    // the eigenvalue-1 cluster, where any such choice is an eigenbasis.
    Matrix x(2 * n, n);
    Vector mu(n);
    int taken = 0;
    for (int c = 2 * n - 1; c >= 0 && taken < n; --c) {
        Vector v = e.vectors.col(c);
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < taken; ++j) {
                v -= x.col(j).dot(v) * x.col(j);
                const Vector jx = omega * x.col(j);
                v -= jx.dot(v) * jx;
            }
        }
        const double norm = v.norm();
        if (norm < 0.5) continue;
        x.col(taken) = v / norm;
        mu[taken] = x.col(taken).dot(s.transpose() * s * x.col(taken));
        ++taken;
    }
    if (taken != n) throw Error("could not build a symplectic eigenbasis");

    Matrix q(2 * n, 2 * n);
    q.leftCols(n) = x;
    q.rightCols(n) = -omega * x;

    EulerForm out;
    out.squeeze = mu.cwiseMax(1.0).cwiseSqrt();
    Vector zinv(2 * n);
    zinv << out.squeeze.cwiseInverse(), out.squeeze;
    out.K = s * q * zinv.asDiagonal();
    out.Kprime = q.transpose();
    return out;
}

}  // namespace squeezeopt
