#pragma once

#include "types.hpp"

#include <limits>

namespace squeezeopt::ralg {

/// Shor's r-algorithm with space dilation in the direction of successive
/// subgradient differences and an adaptive ray search (Stetsyuk's variant).
struct Options {
    double dilation = 3.0;        // alpha > 1; B <- B (I + (1/alpha - 1) xi xi^T)
    double initial_step = 0.1;
    double shrink = 0.95;         // applied when the ray search stops after one step
    double grow = 1.2;            // applied every `grow_every` ray steps
    int grow_every = 3;
    double step_tol = 1e-6;       // stop when an iteration moves x less than this
    double f_tol = 1e-8;          // ... and changes f by at most this
    int max_iter = 5000;
    int max_ray_steps = 200;
};

struct Result {
    Vector x;  // best point seen
    double f = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Minimizes a convex, possibly nonsmooth function. `oracle(x, g)` returns
/// f(x) and writes one subgradient into g.
template <class Oracle>
Result minimize(Oracle&& oracle, Vector x, const Options& opt) {
    const auto dim = x.size();
    Result best;
    Vector g0(dim), g1(dim);
    double f = oracle(x, g0);
    best.x = x;
    best.f = f;
    if (g0.norm() == 0.0) {
        best.converged = true;
        return best;
    }

    Matrix b = Matrix::Identity(dim, dim);
    double h = opt.initial_step;
    int small_moves = 0;
    for (int it = 0; it < opt.max_iter; ++it) {
        best.iterations = it + 1;
        const Vector bg = b.transpose() * g0;
        const double bg_norm = bg.norm();
        if (!(bg_norm > 1e-300)) {
            best.converged = true;
            break;
        }
        const Vector dx = b * (bg / bg_norm);
        const double f_start = f;

        double moved = 0.0;
        double slope = 1.0;
        int steps = 0;
        while (slope > 0.0 && steps < opt.max_ray_steps) {
            x -= h * dx;
            moved += h * dx.norm();
            f = oracle(x, g1);
            if (f < best.f) {
                best.f = f;
                best.x = x;
            }
            ++steps;
            if (steps % opt.grow_every == 0) h *= opt.grow;
            slope = dx.dot(g1);
        }
        if (steps == 1) h *= opt.shrink;

        if (moved < opt.step_tol && std::abs(f - f_start) <= opt.f_tol) {
            // require two consecutive quiet iterations before trusting it
            if (++small_moves >= 2) {
                best.converged = true;
                break;
            }
        } else {
            small_moves = 0;
        }

        Vector r = b.transpose() * (g1 - g0);
        const double r_norm = r.norm();
        if (r_norm > 1e-300) {
            r /= r_norm;
            b += (1.0 / opt.dilation - 1.0) * (b * r) * r.transpose();
        }
        g0 = g1;
    }
    return best;
}

/// Central-difference gradient with step h in every coordinate.
template <class Fn>
Vector finite_diff_gradient(Fn&& fn, const Vector& x, double h) {
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double up = fn(probe);
        probe[i] = x[i] - h;
        const double down = fn(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

}  // namespace squeezeopt::ralg
