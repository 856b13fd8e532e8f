#include "test_util.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace squeezeopt;

namespace {

MatrixFile parse(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix(in);
}

}  // namespace

TEST(MatrixIo, ParsesWithComments) {
    const MatrixFile mf = parse("# a vacuum\n\nn 1 basis J  # header\n1 0\n0 1 # row\n");
    EXPECT_EQ(mf.n, 1);
    EXPECT_EQ(mf.basis, Basis::J);
    EXPECT_EQ(mf.rows, Matrix(Matrix::Identity(2, 2)));
}

TEST(MatrixIo, SigmaBasisIsPermuted) {
    const MatrixFile mf = parse("n 2 basis sigma\n1 2 3 4\n2 5 6 7\n3 6 8 9\n4 7 9 10\n");
    EXPECT_EQ(mf.basis, Basis::Sigma);
    EXPECT_EQ(mf.covariance().j()(0, 1), 3);
    EXPECT_EQ(mf.in_j()(0, 2), 2);
}

TEST(MatrixIo, RejectsMalformedFiles) {
    for (const char* bad : {"", "# only a comment\n", "n two basis J\n1 0\n0 1\n", "n 1 basis X\n1 0\n0 1\n",
                            "n 1 basis J extra\n1 0\n0 1\n", "n 1 basis J\n1 0\n", "n 1 basis J\n1 0 0\n0 1\n",
                            "n 1 basis J\n1\n0 1\n", "n 1 basis J\n1 0\n0 1\n0 0\n", "n 1 basis J\n1 0x\n0 1\n",
                            "n 0 basis J\n", "n 1 basis J\n1 nan\nnan 1\n"})
        EXPECT_THROW(parse(bad), ParseError) << bad;
}

TEST(MatrixIo, WriteReadRoundTripIsExact) {
    random::Rng rng(61);
    const Matrix m = random::valid_covariance(rng, 3).j();
    for (Basis b : {Basis::J, Basis::Sigma}) {
        std::ostringstream out;
        write_matrix(out, permute_basis(m, Basis::J, b), b);
        const MatrixFile mf = parse(out.str());
        EXPECT_EQ(mf.basis, b);
        EXPECT_EQ(mf.in_j(), m);
    }
}

TEST(MatrixIo, MissingFile) { EXPECT_THROW(read_matrix_file("/nonexistent/matrix.txt"), ParseError); }
