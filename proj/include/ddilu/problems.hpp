/// @file problems.hpp
/// @brief Model problems: finite-difference Poisson and convection-diffusion
/// on the unit square/cube, plus Matrix Market input.

#ifndef DDILU_PROBLEMS_HPP
#define DDILU_PROBLEMS_HPP

#include "ddilu/csr_matrix.hpp"
#include "ddilu/ordering.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ddilu {

enum class ProblemKind { poisson2d, poisson3d, convdiff3d, file };

struct ProblemSpec {
    ProblemKind kind = ProblemKind::poisson2d;
    GridDims dims;
    std::array<double, 3> velocity{1.0, 1.0, 1.0};  // convdiff3d only
    std::string path;                                // file only

    /// "poisson2d", "poisson3d", "convdiff3d" or "mtx:<path>".
    std::string name() const;
};

/// Parses the --problem/--size pair. A single size is repeated over the
/// problem's axes ("256" -> 256 x 256 for poisson2d).
ProblemSpec parse_problem(const std::string& problem, const std::string& size);

/// 5-point Laplacian, diagonal 4, unit scaling, x fastest.
CsrMatrix poisson2d(index_t nx, index_t ny);
/// 7-point Laplacian, diagonal 6, unit scaling, x fastest.
CsrMatrix poisson3d(index_t nx, index_t ny, index_t nz);
/// 7-point Laplacian plus centered convection: the neighbor at +1 along
/// axis d gets -1 + b_d h_d / 2, the one at -1 gets -1 - b_d h_d / 2,
/// with h_d = 1 / (n_d + 1).
CsrMatrix convdiff3d(index_t nx, index_t ny, index_t nz, const std::array<double, 3>& b);

/// b = A * 1, so the exact solution is the all-ones vector.
std::vector<double> default_rhs(const CsrMatrix& A);

enum class RhsKind { ones, a_ones };

/// "ones" (b = 1) or "a-ones" (b = A * 1).
std::string to_string(RhsKind kind);
RhsKind parse_rhs_kind(const std::string& text);
std::vector<double> make_rhs(const CsrMatrix& A, RhsKind kind);

struct Problem {
    CsrMatrix A;
    std::optional<GridDims> grid;  // partition hint for generated problems
};

Problem build_problem(const ProblemSpec& spec);

} // namespace ddilu

#endif // DDILU_PROBLEMS_HPP
