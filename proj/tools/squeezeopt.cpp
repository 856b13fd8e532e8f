#include <squeezeopt/squeezeopt.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

using namespace squeezeopt;

namespace {

enum ExitCode { Ok = 0, ParseFailure = 1, InvalidInput = 2, SolverFailure = 3 };

struct InvalidInputError : Error {
    using Error::Error;
};

struct Settings {
    SolveOptions solve;
    std::string out;
    std::string file;
};

const double nats_to_db = 10.0 / std::log(10.0);

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Writes to --out when given, to stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw InvalidInputError("cannot write '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void add_solver_flags(CLI::App* cmd, Settings& s) {
    static const std::map<std::string, GradientMode> modes{
        {"analytic", GradientMode::Analytic}, {"numeric", GradientMode::Numeric}, {"hybrid", GradientMode::Hybrid}};
    cmd->add_option("--tol-step", s.solve.stepTol, "step-norm tolerance")->capture_default_str();
    cmd->add_option("--tol-f", s.solve.fTol, "objective-change tolerance")->capture_default_str();
    cmd->add_option("--tol-constraint", s.solve.constraintTol, "constraint residual tolerance")->capture_default_str();
    cmd->add_option("--max-iter", s.solve.maxIter, "iteration limit per penalty round")->capture_default_str();
    cmd->add_option("--grad", s.solve.gradientMode, "subgradient mode: analytic|numeric|hybrid")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
        ->default_str("analytic");
    cmd->add_option("--seed", s.solve.seed, "random seed")->capture_default_str();
}

CovarianceMatrix load_covariance(const std::string& path) {
    const MatrixFile mf = read_matrix_file(path);
    try {
        return CovarianceMatrix(mf.rows, mf.basis);
    } catch (const Error& e) {
        throw InvalidInputError(e.what());
    }
}

CovarianceMatrix load_valid(const std::string& path) {
    CovarianceMatrix g = load_covariance(path);
    if (!is_valid_covariance(g)) throw InvalidInputError("not a valid covariance matrix (violates Gamma + i sigma >= 0)");
    return g;
}

int cmd_measure(const Settings& s) {
    const CovarianceMatrix g = load_valid(s.file);
    const SolveResult r = minimize_G(g, s.solve);
    Output out(s.out);
    auto& os = out.stream();
    os << "value_nats: " << fmt(r.value) << "\n";
    os << "value_db: " << fmt(r.value * nats_to_db) << "\n";
    os << "status: " << to_string(r.status) << "\n";
    os << "prep_error: " << fmt(r.prepError) << "\n";
    os << "residual: " << fmt(r.residual) << "\n";
    os << "iterations: " << r.iterations << "\n";
    os << "gradient: " << to_string(r.gradientUsed) << "\n";
    if (r.status == SolveStatus::Infeasible) return InvalidInput;
    return r.status == SolveStatus::Converged ? Ok : SolverFailure;
}

int cmd_bounds(const Settings& s) {
    const CovarianceMatrix g = load_valid(s.file);
    const BoundsReport b = compute_bounds(g);
    Output out(s.out);
    auto& os = out.stream();
    os << "spectral_lower: " << fmt(b.spectralLower) << "\n";
    os << "spectral_upper: " << fmt(b.spectralUpper) << "\n";
    os << "williamson_lower: " << fmt(b.williamsonLower) << "\n";
    os << "williamson_upper: " << fmt(b.williamsonUpper) << "\n";
    os << "sdp_lower: " << (b.sdpLower ? fmt(*b.sdpLower) : std::string("unavailable")) << "\n";
    os << "best_lower: " << fmt(b.bestLower) << "\n";
    os << "best_upper: " << fmt(b.bestUpper) << "\n";
    os << "achieves_lower: " << (achieves_lower_check(g) ? "yes" : "no") << "\n";
    return Ok;
}

int cmd_decompose(const Settings& s, const std::string& which) {
    Output out(s.out);
    auto& os = out.stream();
    if (which == "williamson") {
        const CovarianceMatrix g = load_valid(s.file);
        const Basis basis = read_matrix_file(s.file).basis;  // print in the file's basis
        const WilliamsonForm w = williamson(g);
        os << "# Gamma = S^T D S\n";
        os << "# S\n";
        write_matrix(os, permute_basis(w.S, Basis::J, basis), basis);
        os << "# D\n";
        write_matrix(os, permute_basis(w.D, Basis::J, basis), basis);
        os << "symplectic_eigenvalues:";
        for (Eigen::Index i = 0; i < w.spectrum.size(); ++i) os << " " << fmt(w.spectrum[i]);
        os << "\nresidual: " << fmt(max_abs(w.reconstruct() - g.j())) << "\n";
        return Ok;
    }
    const MatrixFile mf = read_matrix_file(s.file);
    const Matrix sj = mf.in_j();
    EulerForm e;
    try {
        e = euler(sj);
    } catch (const Error& err) {
        throw InvalidInputError(err.what());
    }
    os << "# S = K Z K'\n";
    os << "# K\n";
    write_matrix(os, permute_basis(e.K, Basis::J, mf.basis), mf.basis);
    os << "# Z\n";
    write_matrix(os, permute_basis(e.Z(), Basis::J, mf.basis), mf.basis);
    os << "# K'\n";
    write_matrix(os, permute_basis(e.Kprime, Basis::J, mf.basis), mf.basis);
    os << "squeezing:";
    for (Eigen::Index i = 0; i < e.squeeze.size(); ++i) os << " " << fmt(e.squeeze[i]);
    os << "\nF: " << fmt(F(sj)) << "\n";
    os << "residual: " << fmt(max_abs(e.reconstruct() - sj)) << "\n";
    return Ok;
}

int cmd_sweep(const Settings& s, int imax, int jmax, int stride, unsigned threads) {
    Output out(s.out);
    const auto rows = sweep_mista(imax, jmax, stride, s.solve, threads);
    write_sweep_csv(out.stream(), rows);
    bool ok = true;
    for (const SweepRow& r : rows) ok = ok && r.status == SolveStatus::Converged;
    if (!ok) std::cerr << "warning: some grid points did not converge\n";
    return ok ? Ok : SolverFailure;
}

int cmd_gradcheck(const Settings& s, int n, int samples) {
    const GradCheckReport rep = gradient_check(n, samples, s.solve.seed);
    Output out(s.out);
    auto& os = out.stream();
    os << "samples: " << rep.samples << "\n";
    os << "objective_max_rel_error: " << fmt(rep.maxObjectiveError) << "\n";
    os << "constraint_max_rel_error: " << fmt(rep.maxConstraintError) << "\n";
    const bool pass = rep.worst() <= 1e-4;
    os << "result: " << (pass ? "pass" : "fail") << "\n";
    return pass ? Ok : SolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Squeezing measure of Gaussian covariance matrices"};
    app.require_subcommand(1);
    Settings s;

    auto* measure = app.add_subcommand("measure", "compute G for a covariance matrix file");
    measure->add_option("file", s.file, "matrix file")->required();
    add_solver_flags(measure, s);
    measure->add_option("--out", s.out, "write the report here");

    auto* bounds = app.add_subcommand("bounds", "analytic and SDP bounds on G");
    bounds->add_option("file", s.file, "matrix file")->required();
    bounds->add_option("--out", s.out, "write the report here");

    std::string which;
    auto* decompose = app.add_subcommand("decompose", "Williamson form of a covariance matrix or Euler form of a symplectic matrix");
    decompose->add_option("which", which, "williamson|euler")->required()->check(CLI::IsMember({"williamson", "euler"}));
    decompose->add_option("file", s.file, "matrix file")->required();
    decompose->add_option("--out", s.out, "write the report here");

    int imax = 30, jmax = 30, stride = 1;
    unsigned threads = 0;
    auto* sweep = app.add_subcommand("sweep-mista", "three-mode family sweep at the separability threshold, as CSV");
    sweep->add_option("--imax", imax, "largest i index")->capture_default_str();
    sweep->add_option("--jmax", jmax, "largest j index")->capture_default_str();
    sweep->add_option("--stride", stride, "grid stride")->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();
    add_solver_flags(sweep, s);
    sweep->add_option("--out", s.out, "CSV path (stdout if omitted)");

    int n = 3, samples = 20;
    auto* gradcheck = app.add_subcommand("gradcheck", "compare analytic and finite-difference subgradients");
    gradcheck->add_option("--n", n, "mode count")->capture_default_str();
    gradcheck->add_option("--samples", samples, "number of random points")->capture_default_str();
    gradcheck->add_option("--seed", s.solve.seed, "random seed")->capture_default_str();
    gradcheck->add_option("--out", s.out, "write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : ParseFailure;
    }

    try {
        s.solve.validate();
        if (*measure) return cmd_measure(s);
        if (*bounds) return cmd_bounds(s);
        if (*decompose) return cmd_decompose(s, which);
        if (*sweep) return cmd_sweep(s, imax, jmax, stride, threads);
        if (*gradcheck) return cmd_gradcheck(s, n, samples);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return ParseFailure;
    } catch (const InvalidInputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return InvalidInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return SolverFailure;
    }
    return Ok;
}
