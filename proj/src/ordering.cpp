#include "ddilu/ordering.hpp"

#include "ddilu/sparse_ops.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ddilu {

namespace {

std::vector<index_t> prime_factors_descending(index_t p) {
    std::vector<index_t> f;
    for (index_t d = 2; d * d <= p; ++d) {
        while (p % d == 0) {
            f.push_back(d);
            p /= d;
        }
    }
    if (p > 1) {
        f.push_back(p);
    }
    std::sort(f.rbegin(), f.rend());
    return f;
}

/// Cuts [0, n) into `parts` contiguous runs whose sizes differ by at most one.
std::vector<index_t> contiguous_runs(index_t n, index_t parts) {
    std::vector<index_t> run(static_cast<std::size_t>(n));
    for (index_t c = 0; c < parts; ++c) {
        const auto lo = static_cast<index_t>(static_cast<long long>(c) * n / parts);
        const auto hi = static_cast<index_t>(static_cast<long long>(c + 1) * n / parts);
        for (index_t x = lo; x < hi; ++x) {
            run[x] = c;
        }
    }
    return run;
}

/// Walks the graph in BFS order (restarting at the lowest unvisited index
/// for every component) and cuts the order into p balanced runs, so each
/// domain grows from the front left by the previous one.
std::vector<index_t> partition_bfs(const CsrMatrix& A, index_t p) {
    const index_t n = A.n_rows();
    const CsrMatrix adj = symmetrized_pattern(A);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<index_t> order;
    order.reserve(static_cast<std::size_t>(n));
    for (index_t start = 0; start < n; ++start) {
        if (seen[start]) {
            continue;
        }
        seen[start] = 1;
        std::size_t head = order.size();
        order.push_back(start);
        while (head < order.size()) {
            const index_t u = order[head++];
            for (index_t v : adj.row(u).cols) {
                if (!seen[v]) {
                    seen[v] = 1;
                    order.push_back(v);
                }
            }
        }
    }
    std::vector<index_t> owner(static_cast<std::size_t>(n));
    std::size_t k = 0;
    for (index_t d = 0; d < p; ++d) {
        const index_t target = n / p + (d < n % p ? 1 : 0);
        for (index_t c = 0; c < target; ++c) {
            owner[order[k++]] = d;
        }
    }
    return owner;
}

} // namespace

std::optional<BoxCounts> box_counts(const GridDims& grid, index_t p) {
    if (p < 1) {
        throw std::invalid_argument("box_counts: domain count must be >= 1");
    }
    BoxCounts counts{1, 1, 1};
    const std::array<index_t, 3> extent{grid.nx, grid.ny, grid.nz};
    for (index_t f : prime_factors_descending(p)) {
        int best = -1;
        double best_extent = -1.0;
        for (int axis = 2; axis >= 0; --axis) {
            const double e = static_cast<double>(extent[axis]) / counts[axis];
            if (e > best_extent) {
                best_extent = e;
                best = axis;
            }
        }
        counts[best] *= f;
        if (counts[best] > extent[best]) {
            return std::nullopt;
        }
    }
    return counts;
}

std::vector<index_t> partition_boxes(const GridDims& g, const BoxCounts& counts) {
    if (counts[0] < 1 || counts[1] < 1 || counts[2] < 1 || counts[0] > g.nx ||
        counts[1] > g.ny || counts[2] > g.nz) {
        throw std::invalid_argument("partition_boxes: box counts must lie in [1, extent]");
    }
    const auto cx = contiguous_runs(g.nx, counts[0]);
    const auto cy = contiguous_runs(g.ny, counts[1]);
    const auto cz = contiguous_runs(g.nz, counts[2]);
    std::vector<index_t> owner(static_cast<std::size_t>(g.size()));
    for (index_t z = 0; z < g.nz; ++z) {
        for (index_t y = 0; y < g.ny; ++y) {
            for (index_t x = 0; x < g.nx; ++x) {
                owner[x + g.nx * (y + g.ny * z)] = cx[x] + counts[0] * (cy[y] + counts[1] * cz[z]);
            }
        }
    }
    return owner;
}

std::vector<index_t> partition(const CsrMatrix& A, index_t p, std::optional<GridDims> hint) {
    if (!A.is_square()) {
        throw DimensionError("partition: matrix is not square");
    }
    const index_t n = A.n_rows();
    if (p < 1 || p > n) {
        throw std::invalid_argument("partition: domain count must lie in [1, n]");
    }
    if (p == 1) {
        return std::vector<index_t>(static_cast<std::size_t>(n), 0);
    }
    if (hint) {
        if (hint->size() != n) {
            throw std::invalid_argument("partition: grid hint does not match matrix size");
        }
        return contiguous_runs(n, p);
    }
    return partition_bfs(A, p);
}

index_t DomainLayout::interior_offset(index_t d) const {
    index_t off = 0;
    for (index_t k = 0; k < d; ++k) {
        off += static_cast<index_t>(interior_of[k].size());
    }
    return off;
}

index_t DomainLayout::exterior_offset(index_t d) const {
    index_t off = 0;
    for (index_t k = 0; k < d; ++k) {
        off += static_cast<index_t>(exterior_of[k].size());
    }
    return off;
}

DomainLayout classify_and_order(const CsrMatrix& A, std::span<const index_t> owner) {
    if (!A.is_square() || owner.size() != static_cast<std::size_t>(A.n_rows())) {
        throw DimensionError("classify_and_order: owner array does not match matrix");
    }
    const index_t n = A.n_rows();
    index_t p = 0;
    for (index_t d : owner) {
        if (d < 0) {
            throw std::invalid_argument("classify_and_order: negative domain id");
        }
        p = std::max(p, d + 1);
    }
    const CsrMatrix adj = symmetrized_pattern(A);

    DomainLayout layout;
    layout.n = n;
    layout.p = p;
    layout.owner.assign(owner.begin(), owner.end());
    layout.interior_of.resize(static_cast<std::size_t>(p));
    layout.exterior_of.resize(static_cast<std::size_t>(p));
    for (index_t i = 0; i < n; ++i) {
        const index_t d = owner[i];
        bool exterior = false;
        for (index_t j : adj.row(i).cols) {
            if (owner[j] != d) {
                exterior = true;
                break;
            }
        }
        (exterior ? layout.exterior_of : layout.interior_of)[d].push_back(i);
    }

    std::vector<index_t> forward(static_cast<std::size_t>(n));
    index_t next = 0;
    for (const auto& list : layout.interior_of) {
        for (index_t i : list) {
            forward[i] = next++;
        }
    }
    layout.n_interior = next;
    for (const auto& list : layout.exterior_of) {
        for (index_t i : list) {
            forward[i] = next++;
        }
    }
    layout.n_exterior = n - layout.n_interior;
    layout.global_perm = Permutation::from_forward(std::move(forward));
    return layout;
}

namespace {

/// BFS level structure from root over unvisited nodes. Returns the nodes in
/// visiting order; level_end marks the end of each level in that list.
struct LevelStructure {
    std::vector<index_t> order;
    std::vector<std::size_t> level_end;
};

LevelStructure level_structure(const CsrMatrix& adj, index_t root,
                               const std::vector<char>& visited, std::vector<index_t>& stamp,
                               index_t tag) {
    LevelStructure ls;
    ls.order.push_back(root);
    stamp[root] = tag;
    std::size_t begin = 0;
    while (begin < ls.order.size()) {
        const std::size_t end = ls.order.size();
        for (std::size_t k = begin; k < end; ++k) {
            for (index_t v : adj.row(ls.order[k]).cols) {
                if (!visited[v] && stamp[v] != tag) {
                    stamp[v] = tag;
                    ls.order.push_back(v);
                }
            }
        }
        ls.level_end.push_back(end);
        begin = end;
    }
    return ls;
}

} // namespace

Permutation rcm(const CsrMatrix& A) {
    if (!A.is_square()) {
        throw DimensionError("rcm: matrix is not square");
    }
    const index_t n = A.n_rows();
    const CsrMatrix adj = symmetrized_pattern(A);
    const auto degree = [&](index_t v) { return adj.row_ptr()[v + 1] - adj.row_ptr()[v]; };

    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<index_t> stamp(static_cast<std::size_t>(n), -1);
    index_t tag = 0;
    std::vector<index_t> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<index_t> nbrs;
    index_t start = 0;

    while (static_cast<index_t>(order.size()) < n) {
        while (visited[start]) {
            ++start;
        }
        // George-Liu pseudo-peripheral node search.
        index_t root = start;
        LevelStructure ls = level_structure(adj, root, visited, stamp, tag++);
        for (;;) {
            const std::size_t last_begin =
                ls.level_end.size() > 1 ? ls.level_end[ls.level_end.size() - 2] : 0;
            index_t candidate = ls.order[last_begin];
            for (std::size_t k = last_begin; k < ls.order.size(); ++k) {
                const index_t v = ls.order[k];
                if (degree(v) < degree(candidate) ||
                    (degree(v) == degree(candidate) && v < candidate)) {
                    candidate = v;
                }
            }
            LevelStructure trial = level_structure(adj, candidate, visited, stamp, tag++);
            if (trial.level_end.size() > ls.level_end.size()) {
                root = candidate;
                ls = std::move(trial);
            } else {
                break;
            }
        }

        const std::size_t first = order.size();
        order.push_back(root);
        visited[root] = 1;
        for (std::size_t head = first; head < order.size(); ++head) {
            nbrs.clear();
            for (index_t v : adj.row(order[head]).cols) {
                if (!visited[v]) {
                    nbrs.push_back(v);
                }
            }
            std::sort(nbrs.begin(), nbrs.end(), [&](index_t a, index_t b) {
                return degree(a) != degree(b) ? degree(a) < degree(b) : a < b;
            });
            for (index_t v : nbrs) {
                visited[v] = 1;
                order.push_back(v);
            }
        }
    }
    std::reverse(order.begin(), order.end());
    return Permutation::from_inverse(std::move(order));
}

} // namespace ddilu
