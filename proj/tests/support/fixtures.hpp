// Shared test matrices and random data.

#ifndef DDILU_TEST_FIXTURES_HPP
#define DDILU_TEST_FIXTURES_HPP

#include "ddilu/csr_matrix.hpp"
#include "ddilu/ordering.hpp"

#include <random>
#include <vector>

namespace ddilu::test {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0,
                                  double hi = 1.0);

/// tridiag(-1, d, -1) of order n.
CsrMatrix tridiagonal(index_t n, double d = 2.0);

/// Graph Laplacian of a periodic nx x ny grid (zero row sums).
CsrMatrix periodic_laplacian2d(index_t nx, index_t ny);

/// Random sparse matrix with `per_row` off-diagonals per row, made strictly
/// diagonally dominant. Nonsymmetric unless `symmetric`.
CsrMatrix random_dd(index_t n, int per_row, std::mt19937_64& rng, bool symmetric = false);

/// Random symmetric positive definite dense-ish sparse matrix.
CsrMatrix random_spd(index_t n, double density, std::mt19937_64& rng);

/// Layout from contiguous blocks of the unknowns.
DomainLayout contiguous_layout(const CsrMatrix& A, index_t p);

} // namespace ddilu::test

#endif
