#pragma once

#include "measure.hpp"

#include <cstdint>
#include <limits>

namespace squeezeopt {

enum class GradientMode { Analytic, Numeric, Hybrid };
enum class SolveStatus { Converged, MaxIter, Infeasible, NumericalFailure };

inline const char* to_string(GradientMode m) {
    switch (m) {
        case GradientMode::Analytic: return "analytic";
        case GradientMode::Numeric: return "numeric";
        case GradientMode::Hybrid: return "hybrid";
    }
    return "?";
}

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIter: return "max-iter";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::NumericalFailure: return "numerical-failure";
    }
    return "?";
}

struct SolveOptions {
    double stepTol = 1e-6;
    double fTol = 1e-8;
    double constraintTol = 1e-8;
    int maxIter = 20000;
    GradientMode gradientMode = GradientMode::Analytic;
    double penaltyGrowth = 10.0;
    std::uint64_t seed = 0;
    double fdStep = 1e-7;

    void validate() const {
        if (!(stepTol > 0 && fTol > 0 && constraintTol > 0)) throw Error("solver tolerances must be positive");
        if (maxIter < 1) throw Error("maxIter must be at least 1");
        if (!(penaltyGrowth > 1.0)) throw Error("penaltyGrowth must exceed 1");
    }
};

struct SolveResult {
    double value = 0.0;  // nats
    HPoint Hopt;
    Matrix Sopt;
    double prepError = 0.0;
    double residual = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::Converged;
    GradientMode gradientUsed = GradientMode::Analytic;
};

/// H0 = C^{-1}(S^T S) with S from the Williamson form; feasible because
/// Gamma = S^T D S >= S^T S.
inline HPoint starting_point(const CovarianceMatrix& gamma) {
    const WilliamsonForm w = williamson(gamma);
    const Matrix sts = symmetrized(w.S.transpose() * w.S);
    // roundoff in S^T S grows with its condition number
    const double scale = std::max(1.0, max_abs(sts));
    return inverse_cayley(sts, tol::structure * scale);
}

/// Everything the objective and constraint need for one covariance matrix.
class Problem {
public:
    explicit Problem(const CovarianceMatrix& gamma)
        : n_(gamma.modes()), bound_(inverse_cayley_matrix(gamma.j())), start_(starting_point(gamma)) {
        sentinel_ = 1e7 * std::max(objective_f(start_), 1.0);
    }

    int modes() const { return n_; }
    const HPoint& start() const { return start_; }
    double sentinel() const { return sentinel_; }
    /// C^{-1}(Gamma); feasibility is H <= this matrix.
    const Matrix& bound() const { return bound_; }

    /// objective_f inside the Cayley domain, the sentinel outside.
    double objective_safe(const Vector& x) const {
        const HPoint h = params_to_H(x, n_);
        if (!in_H(h)) return sentinel_;
        return objective_f(h);
    }

    /// sum_j v_j^T dH v_j / (1 - lambda_j^2) over the n largest eigenpairs,
    /// the derivative of 1/2 log((1+l)/(1-l)) being 1/(1-l^2).
    Vector objective_subgradient(const Vector& x) const {
        const SymEig e = sym_eig(embed(params_to_H(x, n_)));
        if (!(e.values[2 * n_ - 1] < 1.0)) throw Error("objective_subgradient: point outside the Cayley domain");
        Vector g = Vector::Zero(param_count(n_));
        for (int k = 0; k < n_; ++k) {
            const int c = 2 * n_ - 1 - k;
            const double l = e.values[c];
            g += embed_quadratic_gradient(e.vectors.col(c), n_) / ((1.0 - l) * (1.0 + l));
        }
        return g;
    }

    /// max(0, lambda_max(H) - 1, lambda_max(H - C^{-1}(Gamma))).
    double constraint_residual(const Vector& x) const { return residual_terms(x).value; }

    Vector constraint_subgradient(const Vector& x) const {
        const Terms t = residual_terms(x);
        if (!(t.value > 0.0)) throw Error("constraint_subgradient: point is feasible");
        return embed_quadratic_gradient(t.direction, n_);
    }

private:
    struct Terms {
        double value;
        Vector direction;
    };

    Terms residual_terms(const Vector& x) const {
        const Matrix h = embed(params_to_H(x, n_));
        const SymEig eh = sym_eig(h);
        const SymEig eb = sym_eig(h - bound_);
        const int top = 2 * n_ - 1;
        const double domain = eh.values[top] - 1.0;
        const double order = eb.values[top];
        if (domain <= 0.0 && order <= 0.0) return {0.0, Vector()};
        if (domain > order) return {domain, eh.vectors.col(top)};
        return {order, eb.vectors.col(top)};
    }

    int n_;
    Matrix bound_;
    HPoint start_;
    double sentinel_ = 0.0;
};

/// Largest singular value of S^T g S - Gamma, where g is S^{-T} Gamma S^{-1}
/// lifted to be >= 1. Zero iff S^T S <= Gamma.
inline double preparation_error(const CovarianceMatrix& gamma, const Matrix& s) {
    Eigen::PartialPivLU<Matrix> lu(s);
    if (!(std::abs(lu.determinant()) > 0.0)) throw Error("preparation_error: S is singular");
    const Matrix sinv = lu.inverse();
    const Matrix pulled = symmetrized(sinv.transpose() * gamma.j() * sinv);
    const double lmin = sym_eig(pulled).values[0];
    const auto dim = pulled.rows();
    const Matrix lifted = pulled + (1.0 - std::min(1.0, lmin)) * Matrix::Identity(dim, dim);
    const Matrix diff = s.transpose() * lifted * s - gamma.j();
    return Eigen::JacobiSVD<Matrix>(diff).singularValues()[0];
}

namespace detail {

inline SolveResult run_solver(const CovarianceMatrix& gamma, const Problem& prob, const SolveOptions& opts,
                              GradientMode mode) {
    const int n = prob.modes();
    const double h = opts.fdStep;

    auto objective = [&](const Vector& x, Vector& g) {
        const double f = prob.objective_safe(x);
        if (f >= prob.sentinel()) {
            g.setZero();  // the residual term steers back into the domain
        } else if (mode == GradientMode::Numeric) {
            g = ralg::finite_diff_gradient([&](const Vector& p) { return prob.objective_safe(p); }, x, h);
        } else {
            g = prob.objective_subgradient(x);
        }
        return f;
    };
    auto residual = [&](const Vector& x, Vector& g) {
        const double r = prob.constraint_residual(x);
        if (r <= 0.0) {
            g.setZero();
        } else if (mode == GradientMode::Analytic) {
            g = prob.constraint_subgradient(x);
        } else {
            g = ralg::finite_diff_gradient([&](const Vector& p) { return prob.constraint_residual(p); }, x, h);
        }
        return r;
    };

    const Vector x0 = H_to_params(prob.start());
    PenaltyOptions popt;
    popt.inner.step_tol = opts.stepTol;
    popt.inner.f_tol = opts.fTol;
    popt.inner.max_iter = opts.maxIter;
    popt.inner.initial_step = 0.1;
    popt.constraint_tol = opts.constraintTol;
    popt.growth = opts.penaltyGrowth;
    popt.initial_weight = 10.0 * (objective_f(prob.start()) + 1.0);
    const PenaltyResult pr = penalty_minimize(objective, residual, x0, popt);

    SolveResult out;
    out.gradientUsed = mode;
    out.Hopt = params_to_H(pr.x, n);
    out.value = objective_f(out.Hopt);
    out.residual = prob.constraint_residual(pr.x);
    out.iterations = pr.iterations;
    out.Sopt = sym_sqrt(cayley(out.Hopt));
    out.prepError = preparation_error(gamma, out.Sopt);
    if (out.residual > opts.constraintTol)
        out.status = SolveStatus::NumericalFailure;
    else
        out.status = pr.converged ? SolveStatus::Converged : SolveStatus::MaxIter;
    return out;
}

}  // namespace detail

/// Minimizes objective_f over {H in the Cayley domain : H <= C^{-1}(Gamma)}.
/// The program is convex, so a feasible stationary point is the global G.
inline SolveResult minimize_G(const CovarianceMatrix& gamma, const SolveOptions& opts = {}) {
    opts.validate();
    if (!is_valid_covariance(gamma)) {
        SolveResult bad;
        bad.status = SolveStatus::Infeasible;
        bad.value = std::numeric_limits<double>::quiet_NaN();
        bad.residual = std::numeric_limits<double>::infinity();
        return bad;
    }
    const Problem prob(gamma);
    SolveResult res = detail::run_solver(gamma, prob, opts, opts.gradientMode);

    // A value below a proven lower bound means the iterates escaped the
    // feasible set; retry with difference quotients before giving up.
    const BoundsReport bounds = compute_bounds(gamma, false);
    const auto failed = [&](const SolveResult& r) {
        return r.value < bounds.bestLower - 1e-4 || r.status == SolveStatus::NumericalFailure;
    };
    if (failed(res) && opts.gradientMode != GradientMode::Numeric) {
        SolveResult retry = detail::run_solver(gamma, prob, opts, GradientMode::Numeric);
        retry.iterations += res.iterations;
        res = retry;
    }
    if (res.value < bounds.bestLower - 1e-4) res.status = SolveStatus::NumericalFailure;
    return res;
}

/// Convenience: the solver value only.
inline double G(const CovarianceMatrix& gamma, const SolveOptions& opts = {}) { return minimize_G(gamma, opts).value; }

}  // namespace squeezeopt
