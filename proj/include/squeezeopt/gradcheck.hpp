#pragma once

#include "random.hpp"
#include "solver.hpp"

namespace squeezeopt {

template <class Fn>
Vector finite_diff_subgradient(Fn&& fn, const Vector& x, double h) {
    return ralg::finite_diff_gradient(std::forward<Fn>(fn), x, h);
}

struct GradCheckReport {
    int samples = 0;
    double maxObjectiveError = 0.0;
    double maxConstraintError = 0.0;

    double worst() const { return std::max(maxObjectiveError, maxConstraintError); }
};

inline double relative_deviation(const Vector& analytic, const Vector& numeric) {
    return (analytic - numeric).lpNorm<Eigen::Infinity>() / std::max(1.0, numeric.lpNorm<Eigen::Infinity>());
}

namespace detail {

/// Smallest gap between the n largest embedded eigenvalues and the rest.
inline double top_gap(const Vector& descending, int count) {
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < count && k + 1 < descending.size(); ++k) gap = std::min(gap, descending[k] - descending[k + 1]);
    return gap;
}

}  // namespace detail

/// Compares analytic and central-difference subgradients of the objective
/// and the constraint residual at random points with well-separated
/// eigenvalues, so that both are differentiable there.
inline GradCheckReport gradient_check(int n, int samples, std::uint64_t seed, double h = 1e-6) {
    if (n < 1 || samples < 1) throw Error("gradient_check needs n >= 1 and samples >= 1");
    random::Rng rng(seed);
    GradCheckReport rep;
    const double min_gap = 1e-2;

    while (rep.samples < samples) {
        const CovarianceMatrix gamma = random::valid_covariance(rng, n, 0.8, 1.5);
        const Problem prob(gamma);

        const HPoint h_obj = random::h_point(rng, n, 0.85);
        const Vector spec = embedded_spectrum(h_obj);
        if (detail::top_gap(spec, n) < min_gap) continue;
        const Vector x_obj = H_to_params(h_obj);

        // an infeasible point: push the feasible start past the bound
        const HPoint pert = random::h_point(rng, n, 0.3);
        HPoint h_con{prob.start().A + pert.A, prob.start().B + pert.B};
        const Vector x_con = H_to_params(h_con);
        const Matrix e = embed(h_con);
        const Vector over = sym_eig(e - prob.bound()).values.reverse();
        const Vector inside = sym_eig(e).values.reverse();
        const double order = over[0], domain = inside[0] - 1.0;
        if (std::max(order, domain) < min_gap || std::abs(order - domain) < min_gap) continue;
        if ((order > domain ? over[0] - over[1] : inside[0] - inside[1]) < min_gap) continue;

        const Vector ga = prob.objective_subgradient(x_obj);
        const Vector gn = finite_diff_subgradient([&](const Vector& p) { return prob.objective_safe(p); }, x_obj, h);
        const Vector ca = prob.constraint_subgradient(x_con);
        const Vector cn =
            finite_diff_subgradient([&](const Vector& p) { return prob.constraint_residual(p); }, x_con, h);
        rep.maxObjectiveError = std::max(rep.maxObjectiveError, relative_deviation(ga, gn));
        rep.maxConstraintError = std::max(rep.maxConstraintError, relative_deviation(ca, cn));
        ++rep.samples;
    }
    return rep;
}

}  // namespace squeezeopt
