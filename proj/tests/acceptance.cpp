#include <squeezeopt/squeezeopt.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace squeezeopt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string format(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome single_mode_closed_form() {
    random::Rng rng(1001);
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (int t = 0; t < 100; ++t) {
        const CovarianceMatrix g = random::single_mode_covariance(rng);
        worst = std::max(worst, std::abs(G(g) - G_exact_n1(g)));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-5 && secs < 5.0, format("max |err| %.2e (tol 1e-5), %.2f s (limit 5 s)", worst, secs)};
}

Outcome pure_closed_form() {
    random::Rng rng(1002);
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 3;
        const Matrix s = random::symplectic(rng, n, 1.0);
        const CovarianceMatrix g(symmetrized(s.transpose() * s));
        worst = std::max(worst, std::abs(G(g) - F(sym_sqrt(g.j()))));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-5 && secs < 60.0, format("max |err| %.2e (tol 1e-5), %.2f s (limit 60 s)", worst, secs)};
}

Outcome bounds_sandwich() {
    random::Rng rng(1003);
    double below = -1e300, above = -1e300;
    for (int t = 0; t < 100; ++t) {
        const CovarianceMatrix g = random::valid_covariance(rng, 1 + t % 4);
        const BoundsReport b = compute_bounds(g);
        const double v = G(g);
        below = std::max(below, b.bestLower - v);
        above = std::max(above, v - b.bestUpper);
    }
    return {below <= 1e-5 && above <= 1e-5,
            format("max(lower - value) %.2e, max(value - upper) %.2e (tol 1e-5)", below, above)};
}

Outcome thermal_states() {
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n)
        for (double nbar : {0.0, 1.0, 5.0}) {
            const CovarianceMatrix g(Matrix((2 * nbar + 1) * Matrix::Identity(2 * n, 2 * n)));
            worst = std::max(worst, std::abs(G(g)));
        }
    return {worst <= 1e-7, format("max G %.2e (tol 1e-7)", worst)};
}

Outcome convexity_and_additivity() {
    random::Rng rng(1005);
    double convex = -1e300, sub = -1e300, half = -1e300, corr = -1e300, pure_add = 0.0;
    for (int t = 0; t < 10; ++t) {
        const int n = 1 + t % 3;
        const CovarianceMatrix g1 = random::valid_covariance(rng, n), g2 = random::valid_covariance(rng, n);
        const double v1 = G(g1), v2 = G(g2);
        for (double s : {0.25, 0.5, 0.75}) {
            const CovarianceMatrix m(symmetrized(s * g1.j() + (1 - s) * g2.j()));
            convex = std::max(convex, G(m) - (s * v1 + (1 - s) * v2));
        }
    }
    for (int t = 0; t < 10; ++t) {
        const CovarianceMatrix a = random::valid_covariance(rng, 1 + t % 2);
        const CovarianceMatrix b = random::valid_covariance(rng, 1 + (t / 2) % 2);
        const double ga = G(a), gb = G(b), gab = G(direct_sum(a, b));
        sub = std::max(sub, gab - (ga + gb));
        half = std::max(half, 0.5 * (ga + gb) - gab);
        // additive when one factor is pure
        const CovarianceMatrix p = random::pure_covariance(rng, 1 + t % 2);
        pure_add = std::max(pure_add, std::abs(G(direct_sum(a, p)) - ga - G(p)));
    }
    for (int t = 0; t < 10; ++t) {
        const int n1 = 1 + t % 2, n2 = 1 + (t / 2) % 2;
        const CovarianceMatrix full = random::valid_covariance(rng, n1 + n2);
        std::vector<int> ka, kb;
        for (int k = 0; k < n1; ++k) ka.push_back(k);
        for (int k = 0; k < n2; ++k) kb.push_back(n1 + k);
        corr = std::max(corr, G(partial_trace(full, ka)) + G(partial_trace(full, kb)) - 2 * G(full));
    }
    const bool pass = convex <= 1e-4 && sub <= 1e-4 && half <= 1e-4 && corr <= 1e-4 && pure_add <= 1e-4;
    return {pass, format("convexity %.1e, subadditivity %.1e, half-superadditivity %.1e, correlation bound %.1e",
                         convex, sub, half, corr) +
                      format(", pure additivity %.1e (tol 1e-4)", pure_add)};
}

Outcome measurement_monotonicity() {
    random::Rng rng(1006);
    double worst = -1e300;
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + t % 3;
        const CovarianceMatrix g = random::valid_covariance(rng, n);
        const int mode = std::uniform_int_distribution<int>(0, n - 1)(rng);
        const double d = t % 3 == 0 ? std::numeric_limits<double>::infinity() : std::exp(random::uniform(rng, -3, 3));
        const CovarianceMatrix m = measure_gaussian(g, {mode, d});
        worst = std::max(worst, F(sym_sqrt(m.j())) - F(sym_sqrt(g.j())));
    }
    return {worst <= 1e-9, format("max F(M^1/2) - F(G^1/2) = %.2e over 200 pairs (tol 1e-9)", worst)};
}

Outcome mista_korolkova_grid() {
    int below_cost = 0, small_prep = 0, in_range = 0;
    double max_secs = 0.0;
    for (int j : {1, 15, 29})
        for (int i : {1, 15, 29}) {
            const auto t0 = Clock::now();
            const SweepRow row = sweep_point(i, j, SolveOptions{});
            max_secs = std::max(max_secs, seconds_since(t0));
            const double spectral = spectral_bounds(mista_korolkova(row.r, row.d, row.x)).lower;
            if (spectral <= row.value + 1e-9 && row.value <= row.cost2d + 1e-4) ++in_range;
            if (row.value < row.cost2d) ++below_cost;
            if (row.prepError <= 1e-6) ++small_prep;
        }
    const bool pass = in_range == 9 && below_cost >= 8 && small_prep >= 8 && max_secs < 10.0;
    return {pass, format("in [spectralLower, 2d]: %.0f/9, below 2d: %.0f/9, prep_error <= 1e-6: %.0f/9, max %.2f s/point",
                         in_range, below_cost, small_prep, max_secs)};
}

Outcome gradient_fidelity() {
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) worst = std::max(worst, gradient_check(n, 25, 1008 + n).worst());
    return {worst <= 1e-4, format("max relative deviation %.2e over 100 points (tol 1e-4)", worst)};
}

Outcome decomposition_roundtrips() {
    random::Rng rng(1009);
    double will = 0.0, eul = 0.0, cay = 0.0;
    for (int n = 1; n <= 5; ++n)
        for (int t = 0; t < 20; ++t) {
            const CovarianceMatrix g = random::valid_covariance(rng, n);
            will = std::max(will, max_abs(williamson(g).reconstruct() - g.j()));
            const Matrix s = random::symplectic(rng, n, 1.0);
            eul = std::max(eul, max_abs(euler(s).reconstruct() - s));
            const HPoint h = random::h_point(rng, n, 0.9);
            const HPoint back = inverse_cayley(cayley(h));
            cay = std::max(cay, std::max(max_abs(back.A - h.A), max_abs(back.B - h.B)));
        }
    return {will <= 1e-8 && eul <= 1e-8 && cay <= 1e-10,
            format("Williamson %.2e, Euler %.2e (tol 1e-8), Cayley %.2e (tol 1e-10)", will, eul, cay)};
}

Outcome boundary_robustness() {
    int converged = 0, total = 0;
    for (int j : {1, 15, 29})
        for (int i : {1, 15, 29}) {
            const double r = 0.1 + 0.05 * j, d = r + 0.03 * i;
            const SolveResult res = minimize_G(mista_korolkova(r, d, x_sep(r, d)));
            converged += res.status == SolveStatus::Converged;
            ++total;
        }
    random::Rng rng(1010);
    for (int t = 0; t < 9; ++t) {
        const SolveResult res = minimize_G(random::pure_covariance(rng, 1 + t % 3));
        converged += res.status == SolveStatus::Converged;
        ++total;
    }
    return {converged == total, format("%.0f/%.0f boundary states converged", converged, total)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"n=1 closed form", single_mode_closed_form},
        {"pure-state closed form", pure_closed_form},
        {"bounds sandwich", bounds_sandwich},
        {"thermal states", thermal_states},
        {"convexity and additivity", convexity_and_additivity},
        {"measurement monotonicity", measurement_monotonicity},
        {"three-mode sweep grid", mista_korolkova_grid},
        {"gradient fidelity", gradient_fidelity},
        {"decomposition roundtrips", decomposition_roundtrips},
        {"boundary robustness", boundary_robustness},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("criterion %zu %s: %s (%s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
