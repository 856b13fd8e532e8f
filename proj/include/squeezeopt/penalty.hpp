#pragma once

#include "ralg.hpp"

namespace squeezeopt {

/// Exact-penalty driver: minimizes objective + c * residual with the
/// r-algorithm, growing c until the minimizer satisfies the constraint.
struct PenaltyOptions {
    ralg::Options inner;
    double constraint_tol = 1e-8;
    double initial_weight = 1.0;
    double growth = 10.0;
    int max_rounds = 6;
};

struct PenaltyResult {
    Vector x;
    double objective = 0.0;
    double residual = 0.0;
    double weight = 0.0;
    int iterations = 0;
    bool converged = false;  // inner solver met its tolerances in the last round
};

/// `objective(x, g)` and `residual(x, g)` each return a value and write a
/// subgradient; residual must be >= 0 and vanish exactly on the feasible set.
template <class Objective, class Residual>
PenaltyResult penalty_minimize(Objective&& objective, Residual&& residual, Vector x, const PenaltyOptions& opt) {
    PenaltyResult out;
    out.weight = opt.initial_weight;
    Vector go(x.size()), gr(x.size());
    for (int round = 0; round < opt.max_rounds; ++round) {
        const double c = out.weight;
        auto merit = [&](const Vector& p, Vector& g) {
            const double f = objective(p, go);
            const double r = residual(p, gr);
            g = go + c * gr;
            return f + c * r;
        };
        ralg::Options inner = opt.inner;
        inner.max_iter = std::max(1, opt.inner.max_iter - out.iterations);
        const ralg::Result res = ralg::minimize(merit, x, inner);
        out.iterations += res.iterations;
        x = res.x;
        out.x = x;
        out.objective = objective(x, go);
        out.residual = residual(x, gr);
        out.converged = res.converged;
        if (out.residual <= opt.constraint_tol || out.iterations >= opt.inner.max_iter) break;
        out.weight *= opt.growth;
    }
    return out;
}

}  // namespace squeezeopt
