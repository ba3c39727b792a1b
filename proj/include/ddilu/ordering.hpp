/// @file ordering.hpp
/// @brief Domain decomposition: partitioning, interior/exterior
/// classification, and reverse Cuthill-McKee.

#ifndef DDILU_ORDERING_HPP
#define DDILU_ORDERING_HPP

#include "ddilu/csr_matrix.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace ddilu {

/// Lexicographic grid extents, x fastest.
struct GridDims {
    index_t nx = 1;
    index_t ny = 1;
    index_t nz = 1;

    index_t size() const { return nx * ny * nz; }
};

/// Domains along x, y and z of a box decomposition.
using BoxCounts = std::array<index_t, 3>;

/// Box counts for cutting `grid` into p boxes, or nullopt when some axis
/// would receive more parts than points. Each prime factor of p (largest
/// first) goes to the axis with the largest per-domain extent; ties go to
/// the slowest-varying axis.
std::optional<BoxCounts> box_counts(const GridDims& grid, index_t p);

/// Owner array of the box decomposition of `grid`; box (i, j, k) is domain
/// i + counts[0] * (j + counts[1] * k).
std::vector<index_t> partition_boxes(const GridDims& grid, const BoxCounts& counts);

/// Assigns every unknown to one of p domains. With a grid hint the natural
/// (x fastest) ordering is cut into p contiguous runs of near-equal size,
/// i.e. slabs of whole planes when p divides the slowest extent. Without a
/// hint a BFS order from unknown 0 (restarted at the lowest unvisited index
/// per component) is cut into p balanced runs.
std::vector<index_t> partition(const CsrMatrix& A, index_t p,
                               std::optional<GridDims> hint = std::nullopt);

/// Interior/exterior split of a partitioned unknown set.
///
/// global_perm realizes the ordering
///   [interiors of domain 0, ..., interiors of domain p-1 |
///    exteriors of domain 0, ..., exteriors of domain p-1],
/// each list in ascending original index.
struct DomainLayout {
    index_t n = 0;
    index_t p = 0;
    std::vector<index_t> owner;
    std::vector<std::vector<index_t>> interior_of;
    std::vector<std::vector<index_t>> exterior_of;
    Permutation global_perm;
    index_t n_interior = 0;
    index_t n_exterior = 0;

    /// Start of domain d's interiors within [0, n_interior).
    index_t interior_offset(index_t d) const;
    /// Start of domain d's exteriors within [0, n_exterior).
    index_t exterior_offset(index_t d) const;
    index_t domain_size(index_t d) const {
        return static_cast<index_t>(interior_of[d].size() + exterior_of[d].size());
    }
};

/// Exterior unknowns are those with a neighbor in another domain under the
/// symmetrized pattern |A| + |A^T|.
DomainLayout classify_and_order(const CsrMatrix& A, std::span<const index_t> owner);

/// Reverse Cuthill-McKee on the symmetrized pattern of A.
Permutation rcm(const CsrMatrix& A);

} // namespace ddilu

#endif // DDILU_ORDERING_HPP
