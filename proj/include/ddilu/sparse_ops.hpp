/// @file sparse_ops.hpp
/// @brief Sparse kernels shared by the factorizations and preconditioners.

#ifndef DDILU_SPARSE_OPS_HPP
#define DDILU_SPARSE_OPS_HPP

#include "ddilu/csr_matrix.hpp"

#include <span>
#include <vector>

namespace ddilu {

/// y = A x, each row summed left to right over its stored entries.
std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x);
void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y);
/// y += alpha * A x
void spmv_add(double alpha, const CsrMatrix& A, std::span<const double> x, std::span<double> y);

/// Forward substitution. With unit_diag the diagonal is taken as 1 and any
/// stored diagonal entry is ignored.
std::vector<double> tri_solve_lower(const CsrMatrix& L, std::span<const double> b, bool unit_diag);
/// In-place variant: x holds b on entry and the solution on exit.
void tri_solve_lower_inplace(const CsrMatrix& L, std::span<double> x, bool unit_diag);

/// Backward substitution; the diagonal must be the first stored entry of each row.
std::vector<double> tri_solve_upper(const CsrMatrix& U, std::span<const double> b);
void tri_solve_upper_inplace(const CsrMatrix& U, std::span<double> x);

/// B[p(i), p(j)] = A[i, j].
CsrMatrix permute_symmetric(const CsrMatrix& A, const Permutation& p);

/// Submatrix on sorted row and column index sets, in the induced ordering.
CsrMatrix extract_block(const CsrMatrix& A, std::span<const index_t> rows,
                        std::span<const index_t> cols);

/// Structural product; numerically zero results stay in the pattern.
CsrMatrix sparse_matmul(const CsrMatrix& A, const CsrMatrix& B);

CsrMatrix transpose(const CsrMatrix& A);

/// Pattern of |A| + |A^T| with unit values (diagonal excluded).
CsrMatrix symmetrized_pattern(const CsrMatrix& A);

/// Largest |i - j| over stored entries.
index_t bandwidth(const CsrMatrix& A);

double row_norm_inf(const CsrMatrix& A, index_t i);
double row_norm2(const CsrMatrix& A, index_t i);

} // namespace ddilu

#endif // DDILU_SPARSE_OPS_HPP
