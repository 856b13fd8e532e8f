#pragma once

#include "cayley.hpp"
#include "penalty.hpp"

#include <Eigen/SVD>

#include <optional>

namespace squeezeopt {

/// Squeezing cost of a matrix: sum of the logs of its n largest singular
/// values. Nonnegative on symplectic matrices, zero on orthogonal ones.
inline double F(const Matrix& s) {
    const int n = mode_count_of(s);
    Eigen::JacobiSVD<Matrix> svd(s);
    const Vector sv = svd.singularValues();  // decreasing
    if (!(sv[sv.size() - 1] > 0.0)) throw Error("F: matrix is singular");
    double out = 0.0;
    for (int i = 0; i < n; ++i) out += std::log(sv[i]);
    return out;
}

/// 1/2 sum_i log((1 + s_i)/(1 - s_i)) over the singular values of A + iB.
inline double objective_f(const HPoint& h) {
    const Vector s = top_singular_values(h);
    double out = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (!(s[i] < 1.0)) throw Error("objective_f: point outside the Cayley domain");
        out += std::atanh(s[i]);
    }
    return out;
}

/// Single mode: G = -1/2 log lambda_min, or 0 when lambda_min >= 1.
inline double G_exact_n1(const CovarianceMatrix& gamma) {
    if (gamma.modes() != 1) throw Error("G_exact_n1 needs a single-mode covariance matrix");
    const double lmin = sym_eig(gamma.j()).values[0];
    if (!(lmin > 0.0)) throw Error("covariance matrix is not positive definite");
    return std::max(0.0, -0.5 * std::log(lmin));
}

inline double log_det_spd(const Matrix& m) {
    const Vector ev = sym_eig(m).values;
    if (!(ev[0] > 0.0)) throw Error("matrix is not positive definite");
    return ev.array().log().sum();
}

/// Pure states (det = 1): G = F(Gamma^{1/2}) = 1/2 sum of the logs of the
/// n largest eigenvalues.
inline double G_exact_pure(const CovarianceMatrix& gamma, double pure_tol = tol::pure) {
    const Vector ev = sym_eig(gamma.j()).values.reverse();
    if (!(ev[ev.size() - 1] > 0.0)) throw Error("covariance matrix is not positive definite");
    if (std::abs(ev.array().log().sum()) > pure_tol) throw Error("covariance matrix is not pure (det != 1)");
    if (!is_valid_covariance(gamma)) throw Error("not a valid covariance matrix");
    return 0.5 * ev.head(gamma.modes()).array().log().sum();
}

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

inline Interval spectral_bounds(const CovarianceMatrix& gamma) {
    const Vector ev = sym_eig(gamma.j()).values.reverse();
    Interval out;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] < 1.0 - tol::eig) out.lower -= 0.5 * std::log(ev[i]);
    out.upper = 0.5 * ev.head(gamma.modes()).array().log().sum();
    return out;
}

inline Interval williamson_bounds(const CovarianceMatrix& gamma) {
    const WilliamsonForm w = williamson(gamma);
    const double fs = F(w.S);
    return {fs - 0.5 * log_det_spd(gamma.j()), fs};
}

/// G restricted to one symplectic transformation S with S^T S <= Gamma is
/// bounded below by 1/4 min{ ||g||_1 : g in pi(n), g <= log Gamma }. The trace
/// norm of g in pi(n) is twice the sum of its n largest eigenvalues.
struct SdpOptions {
    double step_tol = 1e-8;
    double f_tol = 1e-10;
    double constraint_tol = 1e-9;
    int max_iter = 20000;
};

inline std::optional<double> sdp_lower_bound(const CovarianceMatrix& gamma, const SdpOptions& opts = {}) {
    const int n = gamma.modes();
    const Matrix log_gamma = sym_log(gamma.j());
    const WilliamsonForm w = williamson(gamma);
    const Matrix start = sym_log(w.S.transpose() * w.S);
    Vector x0 = H_to_params(block_pattern_to_H(start));

    auto objective = [n](const Vector& x, Vector& g) {
        const SymEig e = sym_eig(embed(params_to_H(x, n)));
        g.setZero();
        double f = 0.0;
        for (int k = 0; k < n; ++k) {
            const int c = 2 * n - 1 - k;
            f += 0.5 * e.values[c];
            g += 0.5 * embed_quadratic_gradient(e.vectors.col(c), n);
        }
        return f;
    };
    auto residual = [n, &log_gamma](const Vector& x, Vector& g) {
        const SymEig e = sym_eig(embed(params_to_H(x, n)) - log_gamma);
        const double top = e.values[2 * n - 1];
        if (top <= 0.0) {
            g.setZero();
            return 0.0;
        }
        g = embed_quadratic_gradient(e.vectors.col(2 * n - 1), n);
        return top;
    };

    Vector g(x0.size());
    PenaltyOptions popt;
    popt.inner.step_tol = opts.step_tol;
    popt.inner.f_tol = opts.f_tol;
    popt.inner.max_iter = opts.max_iter;
    popt.inner.initial_step = 0.1 * std::max(1.0, x0.norm());
    popt.constraint_tol = opts.constraint_tol;
    popt.initial_weight = 10.0 * (objective(x0, g) + 1.0);
    const PenaltyResult res = penalty_minimize(objective, residual, x0, popt);
    if (res.residual > opts.constraint_tol || !std::isfinite(res.objective)) return std::nullopt;
    return res.objective;
}

/// Sufficient condition for G to equal the spectral lower bound: Gamma has an
/// orthonormal eigenbasis that is also a symplectic basis. That holds iff
/// Gamma commutes with J^T Gamma J (both are then diagonal in a basis that J
/// permutes in pairs).
inline bool achieves_lower_check(const CovarianceMatrix& gamma, double rel_tol = 1e-9) {
    const Matrix& g = gamma.j();
    const Matrix omega = symplectic_form(gamma.modes());
    const Matrix mirrored = omega.transpose() * g * omega;
    const double scale = std::max(1.0, max_abs(g) * max_abs(g));
    return max_abs(g * mirrored - mirrored * g) <= rel_tol * scale;
}

struct BoundsReport {
    double spectralLower = 0.0;
    double spectralUpper = 0.0;
    double williamsonLower = 0.0;
    double williamsonUpper = 0.0;
    std::optional<double> sdpLower;
    double bestLower = 0.0;
    double bestUpper = 0.0;
};

inline BoundsReport compute_bounds(const CovarianceMatrix& gamma, bool with_sdp = true) {
    BoundsReport r;
    const Interval spec = spectral_bounds(gamma);
    const Interval will = williamson_bounds(gamma);
    r.spectralLower = spec.lower;
    r.spectralUpper = spec.upper;
    r.williamsonLower = will.lower;
    r.williamsonUpper = will.upper;
    if (with_sdp) r.sdpLower = sdp_lower_bound(gamma);
    r.bestLower = std::max(r.spectralLower, r.williamsonLower);
    if (r.sdpLower) r.bestLower = std::max(r.bestLower, *r.sdpLower);
    r.bestUpper = std::min(r.spectralUpper, r.williamsonUpper);
    return r;
}

}  // namespace squeezeopt
