#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace squeezeopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Ordering of the canonical quadratures.
///   Sigma: (q1, p1, q2, p2, ..., qn, pn)
///   J:     (q1, ..., qn, p1, ..., pn)
enum class Basis { Sigma, J };

inline const char* to_string(Basis b) { return b == Basis::Sigma ? "sigma" : "J"; }

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double sym = 1e-10;
inline constexpr double recon = 1e-8;
inline constexpr double validity = 1e-9;
inline constexpr double structure = 1e-9;
inline constexpr double pure = 1e-8;
inline constexpr double eig = 1e-12;
}  // namespace tol

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

inline int mode_count_of(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("matrix is not square");
    if (m.rows() == 0 || m.rows() % 2 != 0) throw Error("matrix dimension must be even and positive");
    return static_cast<int>(m.rows() / 2);
}

/// Index permutation taking sigma-ordered coordinates to J-ordered ones:
/// (M_J)(i, j) = (M_sigma)(perm[i], perm[j]).
inline std::vector<int> sigma_to_j_indices(int n) {
    std::vector<int> idx(2 * n);
    for (int k = 0; k < n; ++k) {
        idx[k] = 2 * k;
        idx[n + k] = 2 * k + 1;
    }
    return idx;
}

/// Conjugation by the mode-interleaving permutation. Pure indexing, so exact.
inline Matrix permute_basis(const Matrix& m, Basis from, Basis to) {
    const int n = mode_count_of(m);
    if (from == to) return m;
    const auto idx = sigma_to_j_indices(n);
    Matrix out(2 * n, 2 * n);
    if (from == Basis::Sigma) {
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) out(i, j) = m(idx[i], idx[j]);
    } else {
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) out(idx[i], idx[j]) = m(i, j);
    }
    return out;
}

inline Vector permute_vector(const Vector& v, Basis from, Basis to) {
    if (v.size() % 2 != 0) throw Error("vector dimension must be even");
    if (from == to) return v;
    const auto idx = sigma_to_j_indices(static_cast<int>(v.size() / 2));
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (from == Basis::Sigma)
            out[i] = v[idx[i]];
        else
            out[idx[i]] = v[i];
    }
    return out;
}

/// Second-moment matrix of an n-mode state. Stored in the J basis; inputs in
/// the sigma basis are permuted on construction and symmetrized.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;

    explicit CovarianceMatrix(const Matrix& entries, Basis basis = Basis::J) {
        n_ = mode_count_of(entries);
        if (!entries.allFinite()) throw Error("covariance matrix has non-finite entries");
        const double scale = std::max(1.0, max_abs(entries));
        if (max_abs(entries - entries.transpose()) > tol::sym * scale)
            throw Error("covariance matrix is not symmetric");
        j_ = permute_basis(symmetrized(entries), basis, Basis::J);
    }

    int modes() const { return n_; }
    int dim() const { return 2 * n_; }
    const Matrix& j() const { return j_; }
    Matrix in(Basis b) const { return permute_basis(j_, Basis::J, b); }

private:
    int n_ = 0;
    Matrix j_;
};

}  // namespace squeezeopt
