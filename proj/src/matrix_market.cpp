#include "ddilu/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace ddilu {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

CsrMatrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw MatrixMarketError("matrix market: empty input");
    }
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw MatrixMarketError("matrix market: malformed header '" + line + "'");
    }
    if (lower(format) != "coordinate") {
        throw MatrixMarketError("matrix market: only coordinate format is supported");
    }
    if (lower(field) != "real") {
        throw MatrixMarketError("matrix market: unsupported field '" + field + "'");
    }
    symmetry = lower(symmetry);
    if (symmetry != "general" && symmetry != "symmetric") {
        throw MatrixMarketError("matrix market: unsupported symmetry '" + symmetry + "'");
    }
    const bool symmetric = symmetry == "symmetric";

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') {
            break;
        }
    }
    long long rows = 0, cols = 0, entries = 0;
    {
        std::istringstream size_line(line);
        if (!(size_line >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0) {
            throw MatrixMarketError("matrix market: malformed size line '" + line + "'");
        }
    }
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
    for (long long k = 0; k < entries; ++k) {
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) {
            throw MatrixMarketError("matrix market: truncated entry list");
        }
        if (i < 1 || i > rows || j < 1 || j > cols) {
            throw MatrixMarketError("matrix market: index out of bounds (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
        }
        const auto r = static_cast<index_t>(i - 1);
        const auto c = static_cast<index_t>(j - 1);
        triplets.push_back({r, c, v});
        if (symmetric && r != c) {
            triplets.push_back({c, r, v});
        }
    }
    return CsrMatrix::from_triplets(static_cast<index_t>(rows), static_cast<index_t>(cols),
                                    std::move(triplets));
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MatrixMarketError("matrix market: cannot open '" + path.string() + "'");
    }
    return read_matrix_market(in);
}

void write_matrix_market(const CsrMatrix& A, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.n_rows() << ' ' << A.n_cols() << ' ' << A.nnz() << '\n';
    out << std::setprecision(17);
    for (index_t i = 0; i < A.n_rows(); ++i) {
        const auto row = A.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            out << i + 1 << ' ' << row.cols[k] + 1 << ' ' << row.vals[k] << '\n';
        }
    }
}

void write_matrix_market(const CsrMatrix& A, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw MatrixMarketError("matrix market: cannot write '" + path.string() + "'");
    }
    write_matrix_market(A, out);
}

} // namespace ddilu
