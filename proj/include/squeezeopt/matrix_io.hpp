#pragma once

#include "types.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace squeezeopt {

class ParseError : public Error {
public:
    using Error::Error;
};

/// Text matrix format:
///
///   # comment
///   n 2 basis J
///   <2n rows of 2n whitespace-separated numbers>
///
/// '#' starts a comment anywhere on a line.
struct MatrixFile {
    int n = 0;
    Basis basis = Basis::J;
    Matrix rows;

    CovarianceMatrix covariance() const { return CovarianceMatrix(symmetrized(rows), basis); }
    /// The matrix converted to the J basis, without symmetrization.
    Matrix in_j() const { return permute_basis(rows, basis, Basis::J); }
};

inline MatrixFile parse_matrix(std::istream& in) {
    MatrixFile out;
    bool have_header = false;
    int row = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (!have_header) {
            std::string basis_kw, basis_name;
            int n = 0;
            std::istringstream hs(line);
            std::string n_kw;
            if (!(hs >> n_kw >> n >> basis_kw >> basis_name) || n_kw != "n" || basis_kw != "basis")
                throw ParseError(where + "expected header 'n <int> basis <sigma|J>'");
            if (n < 1) throw ParseError(where + "mode count must be positive");
            if (basis_name == "sigma")
                out.basis = Basis::Sigma;
            else if (basis_name == "J")
                out.basis = Basis::J;
            else
                throw ParseError(where + "unknown basis '" + basis_name + "'");
            std::string extra;
            if (hs >> extra) throw ParseError(where + "trailing text after header");
            out.n = n;
            out.rows.resize(2 * n, 2 * n);
            have_header = true;
            continue;
        }
        if (row >= 2 * out.n) throw ParseError(where + "too many rows");
        std::istringstream rs(line);
        for (int c = 0; c < 2 * out.n; ++c) {
            std::string tok;
            if (!(rs >> tok)) throw ParseError(where + "expected " + std::to_string(2 * out.n) + " entries");
            try {
                std::size_t used = 0;
                out.rows(row, c) = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError(where + "not a number: '" + tok + "'");
            }
        }
        std::string extra;
        if (rs >> extra) throw ParseError(where + "too many entries");
        ++row;
    }
    if (!have_header) throw ParseError("missing header line");
    if (row != 2 * out.n) throw ParseError("expected " + std::to_string(2 * out.n) + " rows, got " + std::to_string(row));
    if (!out.rows.allFinite()) throw ParseError("non-finite entry");
    return out;
}

inline MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_matrix(in);
}

inline void write_matrix(std::ostream& out, const Matrix& m, Basis basis) {
    const int n = mode_count_of(m);
    out << "n " << n << " basis " << to_string(basis) << "\n";
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << (j ? " " : "") << buf;
        }
        out << "\n";
    }
}

}  // namespace squeezeopt
