#include "test_util.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace squeezeopt;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("squeezeopt_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    CliRun run(const std::string& args) {
        const std::string cmd = std::string(SQUEEZEOPT_CLI) + " " + args + " 2>/dev/null";
        FILE* pipe = ::popen(cmd.c_str(), "r");
        std::string out;
        char buf[4096];
        while (std::size_t k = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, k);
        const int status = ::pclose(pipe);
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
    }

    static std::map<std::string, std::string> fields(const std::string& report) {
        std::map<std::string, std::string> kv;
        std::istringstream in(report);
        std::string line;
        while (std::getline(in, line)) {
            const auto colon = line.find(": ");
            if (colon != std::string::npos) kv[line.substr(0, colon)] = line.substr(colon + 2);
        }
        return kv;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, MeasureIdentity) {
    const CliRun r = run("measure " + file("id.txt", "n 2 basis J\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n"));
    EXPECT_EQ(r.code, 0);
    auto kv = fields(r.out);
    EXPECT_NEAR(std::stod(kv["value_nats"]), 0.0, 1e-10);
    EXPECT_EQ(kv["status"], "converged");
}

TEST_F(Cli, MeasureSingleModeClosedForm) {
    const CliRun r = run("measure " + file("a.txt", "n 1 basis J\n4 0\n0 0.33333333333333333\n") + " --tol-step 1e-7");
    EXPECT_EQ(r.code, 0);
    auto kv = fields(r.out);
    EXPECT_NEAR(std::stod(kv["value_nats"]), 0.5 * std::log(3.0), 1e-5);
    EXPECT_NEAR(std::stod(kv["value_db"]), 0.5 * std::log(3.0) * 10 / std::log(10.0), 1e-4);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("measure " + file("bad.txt", "n 1 basis J\n1 0\n0 oops\n")).code, 1);
    EXPECT_EQ(run("measure " + dir_.string() + "/missing.txt").code, 1);
    EXPECT_EQ(run("measure " + file("inv.txt", "n 1 basis J\n0.5 0\n0 0.5\n")).code, 2);
    EXPECT_EQ(run("measure " + file("asym.txt", "n 1 basis J\n1 0.5\n0 1\n")).code, 2);
    EXPECT_EQ(run("bogus").code, 1);
    EXPECT_EQ(run("measure " + file("ok.txt", "n 1 basis J\n2 0\n0 2\n") + " --grad sideways").code, 1);
    EXPECT_EQ(run("measure " + file("ok2.txt", "n 1 basis J\n2 0\n0 2\n") + " --tol-step -1").code, 2);
}

TEST_F(Cli, MeasureRespectsGradientFlag) {
    const CliRun r = run("measure " + file("t.txt", "n 1 basis J\n3 1\n1 1\n") + " --grad hybrid");
    EXPECT_EQ(fields(r.out)["gradient"], "hybrid");
}

TEST_F(Cli, Bounds) {
    const CliRun id = run("bounds " + file("id.txt", "n 1 basis J\n1 0\n0 1\n"));
    EXPECT_EQ(id.code, 0);
    for (const char* key : {"spectral_lower", "spectral_upper", "williamson_lower", "williamson_upper", "best_lower"})
        EXPECT_NEAR(std::stod(fields(id.out)[key]), 0.0, 1e-9) << key;

    const CliRun th = run("bounds " + file("th.txt", "n 2 basis J\n3 0 0 0\n0 3 0 0\n0 0 3 0\n0 0 0 3\n"));
    auto kv = fields(th.out);
    EXPECT_EQ(std::stod(kv["spectral_lower"]), 0.0);
    EXPECT_NEAR(std::stod(kv["spectral_upper"]), std::log(3.0), 1e-9);

    const double c = std::cosh(1.0), s = std::sinh(1.0);
    std::ostringstream tmsv;
    tmsv.precision(17);
    tmsv << "n 2 basis J\n" << c << " " << s << " 0 0\n" << s << " " << c << " 0 0\n0 0 " << c << " " << -s
         << "\n0 0 " << -s << " " << c << "\n";
    auto pure = fields(run("bounds " + file("tmsv.txt", tmsv.str())).out);
    EXPECT_NEAR(std::stod(pure["williamson_lower"]), std::stod(pure["williamson_upper"]), 1e-8);
}

TEST_F(Cli, Decompose) {
    const std::string id = file("id.txt", "n 1 basis J\n1 0\n0 1\n");
    const CliRun w = run("decompose williamson " + id);
    EXPECT_EQ(w.code, 0);
    EXPECT_LE(std::stod(fields(w.out)["residual"]), 1e-12);
    const CliRun e = run("decompose euler " + id);
    EXPECT_EQ(e.code, 0);
    EXPECT_EQ(fields(e.out)["squeezing"], "1");

    random::Rng rng(71);
    const CovarianceMatrix g = random::valid_covariance(rng, 3);
    std::ostringstream text;
    write_matrix(text, g.in(Basis::Sigma), Basis::Sigma);
    const CliRun rw = run("decompose williamson " + file("g.txt", text.str()));
    EXPECT_EQ(rw.code, 0);
    EXPECT_LE(std::stod(fields(rw.out)["residual"]), 1e-8);

    EXPECT_EQ(run("decompose euler " + file("d2.txt", "n 1 basis J\n2 0\n0 2\n")).code, 2);
}

TEST_F(Cli, GradcheckIsDeterministic) {
    const CliRun a = run("gradcheck --n 1 --samples 5 --seed 3");
    const CliRun b = run("gradcheck --n 3 --samples 5 --seed 3");
    const CliRun c = run("gradcheck --n 3 --samples 5 --seed 3");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(b.code, 0);
    EXPECT_EQ(fields(a.out)["result"], "pass");
    EXPECT_EQ(b.out, c.out);
}

TEST_F(Cli, SweepCsvDeterministicAndOrdered) {
    const std::string p1 = (dir_ / "s1.csv").string(), p2 = (dir_ / "s2.csv").string();
    EXPECT_EQ(run("sweep-mista --imax 30 --jmax 30 --stride 14 --threads 3 --out " + p1).code, 0);
    EXPECT_EQ(run("sweep-mista --imax 30 --jmax 30 --stride 14 --threads 1 --out " + p2).code, 0);
    std::ifstream f1(p1), f2(p2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    EXPECT_EQ(s1.str(), s2.str());

    std::istringstream in(s1.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "i,j,r,d,x_sep,lower,upper,value,prep_error,cost_2d");
    int rows = 0;
    while (std::getline(in, line)) {
        std::vector<double> v;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) v.push_back(std::stod(cell));
        ASSERT_EQ(v.size(), 10u);
        EXPECT_LE(v[5], v[7] + 1e-4);             // lower <= value
        EXPECT_LE(v[7], v[9] + 1e-4);             // value <= 2d
        EXPECT_DOUBLE_EQ(v[9], 2 * v[3]);
        ++rows;
    }
    EXPECT_EQ(rows, 9);
    EXPECT_EQ(run("sweep-mista --stride 14 --out /nonexistent/dir/x.csv").code, 2);
}

TEST_F(Cli, FullSweepHas900Rows) {
    const std::string p = (dir_ / "full.csv").string();
    EXPECT_EQ(run("sweep-mista --out " + p).code, 0);
    std::ifstream f(p);
    int lines = 0;
    for (std::string line; std::getline(f, line);) ++lines;
    EXPECT_EQ(lines, 901);
}
