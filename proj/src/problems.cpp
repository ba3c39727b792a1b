#include "ddilu/problems.hpp"

#include "ddilu/matrix_market.hpp"
#include "ddilu/sparse_ops.hpp"

#include <sstream>
#include <stdexcept>

namespace ddilu {

namespace {

void require_dims(index_t nx, index_t ny, index_t nz) {
    if (nx < 1 || ny < 1 || nz < 1) {
        throw std::invalid_argument("grid dimensions must be >= 1");
    }
}

/// Stencil over a box grid: `diag` on the diagonal; the neighbor at offset
/// s = -1/+1 along axis a gets coeff[a][s > 0].
CsrMatrix stencil(index_t nx, index_t ny, index_t nz, double diag,
                  const std::array<std::array<double, 2>, 3>& coeff) {
    require_dims(nx, ny, nz);
    const index_t n = nx * ny * nz;
    std::vector<index_t> row_ptr{0};
    std::vector<index_t> col_idx;
    std::vector<double> values;
    row_ptr.reserve(static_cast<std::size_t>(n) + 1);
    col_idx.reserve(static_cast<std::size_t>(n) * 7);
    values.reserve(static_cast<std::size_t>(n) * 7);
    const index_t sx = 1;
    const index_t sy = nx;
    const index_t sz = nx * ny;
    const auto push = [&](index_t c, double v) {
        col_idx.push_back(c);
        values.push_back(v);
    };
    for (index_t k = 0; k < nz; ++k) {
        for (index_t j = 0; j < ny; ++j) {
            for (index_t i = 0; i < nx; ++i) {
                const index_t r = i * sx + j * sy + k * sz;
                if (k > 0) push(r - sz, coeff[2][0]);
                if (j > 0) push(r - sy, coeff[1][0]);
                if (i > 0) push(r - sx, coeff[0][0]);
                push(r, diag);
                if (i + 1 < nx) push(r + sx, coeff[0][1]);
                if (j + 1 < ny) push(r + sy, coeff[1][1]);
                if (k + 1 < nz) push(r + sz, coeff[2][1]);
                row_ptr.push_back(static_cast<index_t>(col_idx.size()));
            }
        }
    }
    return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

index_t parse_extent(const std::string& text) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || v < 1) {
        throw std::invalid_argument("bad grid extent '" + text + "'");
    }
    return static_cast<index_t>(v);
}

} // namespace

std::string ProblemSpec::name() const {
    switch (kind) {
    case ProblemKind::poisson2d:
        return "poisson2d";
    case ProblemKind::poisson3d:
        return "poisson3d";
    case ProblemKind::convdiff3d:
        return "convdiff3d";
    case ProblemKind::file:
        return "mtx:" + path;
    }
    return "unknown";
}

ProblemSpec parse_problem(const std::string& problem, const std::string& size) {
    ProblemSpec spec;
    int axes = 3;
    if (problem == "poisson2d") {
        spec.kind = ProblemKind::poisson2d;
        axes = 2;
    } else if (problem == "poisson3d") {
        spec.kind = ProblemKind::poisson3d;
    } else if (problem == "convdiff3d") {
        spec.kind = ProblemKind::convdiff3d;
    } else if (problem.rfind("mtx:", 0) == 0 && problem.size() > 4) {
        spec.kind = ProblemKind::file;
        spec.path = problem.substr(4);
        return spec;
    } else {
        throw std::invalid_argument("unknown problem '" + problem + "'");
    }

    std::vector<index_t> ext;
    std::stringstream ss(size);
    std::string item;
    while (std::getline(ss, item, ',')) {
        ext.push_back(parse_extent(item));
    }
    if (ext.size() == 1) {
        ext.assign(static_cast<std::size_t>(axes), ext[0]);
    }
    if (ext.size() != static_cast<std::size_t>(axes)) {
        throw std::invalid_argument("--size needs 1 or " + std::to_string(axes) +
                                    " extents for " + problem);
    }
    spec.dims.nx = ext[0];
    spec.dims.ny = ext[1];
    spec.dims.nz = axes == 3 ? ext[2] : 1;
    return spec;
}

CsrMatrix poisson2d(index_t nx, index_t ny) {
    return stencil(nx, ny, 1, 4.0, {{{-1.0, -1.0}, {-1.0, -1.0}, {0.0, 0.0}}});
}

CsrMatrix poisson3d(index_t nx, index_t ny, index_t nz) {
    return stencil(nx, ny, nz, 6.0, {{{-1.0, -1.0}, {-1.0, -1.0}, {-1.0, -1.0}}});
}

CsrMatrix convdiff3d(index_t nx, index_t ny, index_t nz, const std::array<double, 3>& b) {
    require_dims(nx, ny, nz);
    const std::array<index_t, 3> n{nx, ny, nz};
    std::array<std::array<double, 2>, 3> coeff{};
    for (std::size_t d = 0; d < 3; ++d) {
        const double c = 0.5 * b[d] / static_cast<double>(n[d] + 1);
        coeff[d] = {-1.0 - c, -1.0 + c};
    }
    return stencil(nx, ny, nz, 6.0, coeff);
}

std::vector<double> default_rhs(const CsrMatrix& A) {
    const std::vector<double> ones(static_cast<std::size_t>(A.n_cols()), 1.0);
    return spmv(A, ones);
}

std::string to_string(RhsKind kind) {
    return kind == RhsKind::ones ? "ones" : "a-ones";
}

RhsKind parse_rhs_kind(const std::string& text) {
    if (text == "ones") {
        return RhsKind::ones;
    }
    if (text == "a-ones") {
        return RhsKind::a_ones;
    }
    throw std::invalid_argument("unknown right-hand side '" + text + "'");
}

std::vector<double> make_rhs(const CsrMatrix& A, RhsKind kind) {
    if (kind == RhsKind::a_ones) {
        return default_rhs(A);
    }
    return std::vector<double>(static_cast<std::size_t>(A.n_rows()), 1.0);
}

Problem build_problem(const ProblemSpec& spec) {
    const GridDims& g = spec.dims;
    switch (spec.kind) {
    case ProblemKind::poisson2d:
        return {poisson2d(g.nx, g.ny), GridDims{g.nx, g.ny, 1}};
    case ProblemKind::poisson3d:
        return {poisson3d(g.nx, g.ny, g.nz), g};
    case ProblemKind::convdiff3d:
        return {convdiff3d(g.nx, g.ny, g.nz, spec.velocity), g};
    case ProblemKind::file:
        return {read_matrix_market(spec.path), std::nullopt};
    }
    throw std::invalid_argument("build_problem: unknown kind");
}

} // namespace ddilu
