#include "fixtures.hpp"

#include <cmath>
#include <set>

namespace ddilu::test {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) {
        x = dist(rng);
    }
    return v;
}

CsrMatrix tridiagonal(index_t n, double d) {
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) {
        if (i > 0) t.push_back({i, i - 1, -1.0});
        t.push_back({i, i, d});
        if (i + 1 < n) t.push_back({i, i + 1, -1.0});
    }
    return CsrMatrix::from_triplets(n, n, std::move(t));
}

CsrMatrix periodic_laplacian2d(index_t nx, index_t ny) {
    std::vector<Triplet> t;
    const index_t n = nx * ny;
    for (index_t j = 0; j < ny; ++j) {
        for (index_t i = 0; i < nx; ++i) {
            const index_t r = i + nx * j;
            t.push_back({r, r, 4.0});
            t.push_back({r, (i + 1) % nx + nx * j, -1.0});
            t.push_back({r, (i + nx - 1) % nx + nx * j, -1.0});
            t.push_back({r, i + nx * ((j + 1) % ny), -1.0});
            t.push_back({r, i + nx * ((j + ny - 1) % ny), -1.0});
        }
    }
    return CsrMatrix::from_triplets(n, n, std::move(t));
}

CsrMatrix random_dd(index_t n, int per_row, std::mt19937_64& rng, bool symmetric) {
    std::uniform_int_distribution<index_t> col(0, n - 1);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<std::set<index_t>> cols(static_cast<std::size_t>(n));
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) {
        for (int k = 0; k < per_row; ++k) {
            const index_t j = col(rng);
            if (j == i || cols[i].count(j)) continue;
            const double v = val(rng);
            cols[i].insert(j);
            t.push_back({i, j, v});
            if (symmetric && !cols[j].count(i)) {
                cols[j].insert(i);
                t.push_back({j, i, v});
            }
        }
    }
    std::vector<double> rowsum(static_cast<std::size_t>(n), 0.0);
    for (const auto& e : t) rowsum[e.row] += std::fabs(e.value);
    for (index_t i = 0; i < n; ++i) t.push_back({i, i, rowsum[i] + 1.0});
    return CsrMatrix::from_triplets(n, n, std::move(t));
}

CsrMatrix random_spd(index_t n, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Triplet> t;
    std::vector<double> rowsum(static_cast<std::size_t>(n), 0.0);
    for (index_t i = 0; i < n; ++i) {
        for (index_t j = i + 1; j < n; ++j) {
            if (u(rng) < density) {
                const double v = 2.0 * u(rng) - 1.0;
                t.push_back({i, j, v});
                t.push_back({j, i, v});
                rowsum[i] += std::fabs(v);
                rowsum[j] += std::fabs(v);
            }
        }
    }
    for (index_t i = 0; i < n; ++i) t.push_back({i, i, rowsum[i] + 0.5 + u(rng)});
    return CsrMatrix::from_triplets(n, n, std::move(t));
}

DomainLayout contiguous_layout(const CsrMatrix& A, index_t p) {
    const index_t n = A.n_rows();
    std::vector<index_t> owner(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        owner[i] = static_cast<index_t>(static_cast<long long>(i) * p / n);
    }
    return classify_and_order(A, owner);
}

} // namespace ddilu::test
