#include "ddilu/ordering.hpp"

#include "ddilu/problems.hpp"
#include "ddilu/sparse_ops.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>

namespace ddilu {
namespace {

void expect_valid_layout(const CsrMatrix& A, const DomainLayout& L) {
    ASSERT_EQ(L.n, A.n_rows());
    std::vector<int> seen(static_cast<std::size_t>(L.n), 0);
    index_t n1 = 0;
    index_t n2 = 0;
    for (index_t d = 0; d < L.p; ++d) {
        EXPECT_TRUE(std::is_sorted(L.interior_of[d].begin(), L.interior_of[d].end()));
        EXPECT_TRUE(std::is_sorted(L.exterior_of[d].begin(), L.exterior_of[d].end()));
        for (index_t i : L.interior_of[d]) {
            ++seen[i];
            EXPECT_EQ(L.owner[i], d);
        }
        for (index_t i : L.exterior_of[d]) {
            ++seen[i];
            EXPECT_EQ(L.owner[i], d);
        }
        EXPECT_EQ(L.interior_offset(d), n1);
        EXPECT_EQ(L.exterior_offset(d), n2);
        n1 += static_cast<index_t>(L.interior_of[d].size());
        n2 += static_cast<index_t>(L.exterior_of[d].size());
    }
    EXPECT_EQ(n1, L.n_interior);
    EXPECT_EQ(n2, L.n_exterior);
    for (int c : seen) EXPECT_EQ(c, 1);

    // exterior <=> has a neighbor in another domain (symmetrized pattern)
    const CsrMatrix S = symmetrized_pattern(A);
    for (index_t i = 0; i < L.n; ++i) {
        bool cross = false;
        for (index_t j : S.row(i).cols) cross = cross || L.owner[j] != L.owner[i];
        const bool is_ext = L.global_perm(i) >= L.n_interior;
        EXPECT_EQ(cross, is_ext) << "node " << i;
    }

    // permuted leading block is block diagonal
    const CsrMatrix P = permute_symmetric(A, L.global_perm);
    const auto inv = L.global_perm.inverse();
    for (index_t i = 0; i < L.n_interior; ++i) {
        for (index_t j : P.row(i).cols) {
            if (j < L.n_interior) {
                EXPECT_EQ(L.owner[inv[i]], L.owner[inv[j]]);
            }
        }
    }

    // global_perm lists interiors then exteriors, domain by domain
    index_t k = 0;
    for (index_t d = 0; d < L.p; ++d)
        for (index_t i : L.interior_of[d]) EXPECT_EQ(L.global_perm(i), k++);
    for (index_t d = 0; d < L.p; ++d)
        for (index_t i : L.exterior_of[d]) EXPECT_EQ(L.global_perm(i), k++);
}

TEST(Partition, SingleDomain) {
    const auto A = poisson2d(5, 5);
    const auto owner = partition(A, 1);
    EXPECT_TRUE(std::all_of(owner.begin(), owner.end(), [](index_t d) { return d == 0; }));
}

TEST(Partition, GridHintCutsContiguousRows) {
    const auto A = poisson2d(4, 4);
    const auto owner = partition(A, 2, GridDims{4, 4, 1});
    for (index_t i = 0; i < 16; ++i) {
        EXPECT_EQ(owner[i], i / 8);
    }
    // 10 unknowns into 3 runs: 3, 3, 4
    const auto B = poisson2d(5, 2);
    EXPECT_EQ(partition(B, 3, GridDims{5, 2, 1}),
              (std::vector<index_t>{0, 0, 0, 1, 1, 1, 2, 2, 2, 2}));
    // whole planes when p divides nz
    const auto C = poisson3d(3, 3, 4);
    const auto oc = partition(C, 4, GridDims{3, 3, 4});
    for (index_t i = 0; i < 36; ++i) {
        EXPECT_EQ(oc[i], i / 9);
    }
}

TEST(Partition, BoxesSplitAlongLongerAxis) {
    // tie between x and y goes to the slowest axis
    EXPECT_EQ(partition_boxes({4, 4, 1}, *box_counts({4, 4, 1}, 2)),
              (std::vector<index_t>{0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1}));
    const auto ob = partition_boxes({8, 2, 1}, *box_counts({8, 2, 1}, 2));
    for (index_t i = 0; i < 16; ++i) {
        EXPECT_EQ(ob[i], (i % 8) / 4);
    }
    const auto oq = partition_boxes({4, 4, 1}, {2, 2, 1});
    EXPECT_EQ(oq[0], 0);
    EXPECT_EQ(oq[3], 1);
    EXPECT_EQ(oq[12], 2);
    EXPECT_EQ(oq[15], 3);
    EXPECT_THROW(partition_boxes({4, 4, 1}, {5, 1, 1}), std::invalid_argument);
    EXPECT_THROW(partition_boxes({4, 4, 1}, {0, 1, 1}), std::invalid_argument);
}

TEST(Partition, BoxCountsForBenchmarkGrids) {
    EXPECT_EQ(box_counts({128, 128, 128}, 4), (BoxCounts{1, 2, 2}));
    EXPECT_EQ(box_counts({512, 512, 1}, 64), (BoxCounts{8, 8, 1}));
    EXPECT_EQ(box_counts({256, 256, 1}, 16), (BoxCounts{4, 4, 1}));
    EXPECT_EQ(box_counts({4, 1, 1}, 5), std::nullopt);
}

TEST(Partition, StructuredBalance) {
    for (index_t p : {2, 3, 4, 6, 8, 16}) {
        const GridDims g{30, 20, 1};
        for (const auto& owner : {partition(poisson2d(30, 20), p, g),
                                  partition_boxes(g, *box_counts(g, p))}) {
            std::vector<index_t> size(static_cast<std::size_t>(p), 0);
            for (index_t d : owner) ++size[d];
            const double avg = 600.0 / p;
            for (index_t s : size) {
                EXPECT_LE(std::fabs(s - avg), std::max(1.0, 0.1 * avg)) << "p=" << p;
            }
        }
    }
}

bool domain_connected(const CsrMatrix& A, const std::vector<index_t>& owner, index_t d) {
    std::vector<index_t> nodes;
    for (index_t i = 0; i < A.n_rows(); ++i)
        if (owner[i] == d) nodes.push_back(i);
    if (nodes.empty()) return false;
    std::set<index_t> seen{nodes[0]};
    std::queue<index_t> q;
    q.push(nodes[0]);
    while (!q.empty()) {
        const index_t u = q.front();
        q.pop();
        for (index_t v : A.row(u).cols) {
            if (owner[v] == d && seen.insert(v).second) q.push(v);
        }
    }
    return seen.size() == nodes.size();
}

TEST(Partition, BfsGrowthGivesConnectedBalancedParts) {
    for (const auto& A : {poisson2d(20, 20), poisson2d(31, 7), poisson3d(8, 8, 8)}) {
        const index_t n = A.n_rows();
        const auto owner = partition(A, 4);
        std::vector<index_t> size(4, 0);
        for (index_t d : owner) ++size[d];
        for (index_t d = 0; d < 4; ++d) {
            EXPECT_LE(std::fabs(size[d] - n / 4.0), 0.1 * n / 4.0);
            EXPECT_TRUE(domain_connected(A, owner, d)) << "n=" << n << " domain " << d;
        }
    }
}

TEST(Partition, InvalidDomainCountThrows) {
    const auto A = poisson2d(2, 2);
    EXPECT_THROW(partition(A, 5), std::invalid_argument);
    EXPECT_THROW(partition(A, 0), std::invalid_argument);
}

TEST(ClassifyAndOrder, SingleDomainHasNoExteriors) {
    const auto A = poisson2d(4, 3);
    const auto L = classify_and_order(A, std::vector<index_t>(12, 0));
    EXPECT_EQ(L.n_exterior, 0);
    EXPECT_EQ(L.global_perm, Permutation::identity(12));
    expect_valid_layout(A, L);
}

TEST(ClassifyAndOrder, PathSplitThreeThree) {
    const auto A = test::tridiagonal(6);
    const auto L = classify_and_order(A, std::vector<index_t>{0, 0, 0, 1, 1, 1});
    EXPECT_EQ(L.exterior_of[0], (std::vector<index_t>{2}));
    EXPECT_EQ(L.exterior_of[1], (std::vector<index_t>{3}));
    EXPECT_EQ(L.n_interior, 4);
    expect_valid_layout(A, L);
}

TEST(ClassifyAndOrder, DenseMatrixMakesEverythingExterior) {
    std::vector<Triplet> t;
    for (index_t i = 0; i < 4; ++i)
        for (index_t j = 0; j < 4; ++j) t.push_back({i, j, i == j ? 4.0 : 1.0});
    const auto A = CsrMatrix::from_triplets(4, 4, std::move(t));
    const auto L = classify_and_order(A, std::vector<index_t>{0, 0, 1, 1});
    EXPECT_EQ(L.n_interior, 0);
    EXPECT_EQ(L.n_exterior, 4);
    expect_valid_layout(A, L);
}

TEST(ClassifyAndOrder, NonsymmetricCouplingCountsBothWays) {
    // only A(0, 3) couples the halves; node 3 must still be exterior
    const auto A = CsrMatrix::from_triplets(
        4, 4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}, {0, 3, 1}, {0, 1, 1}, {2, 3, 1}});
    const auto L = classify_and_order(A, std::vector<index_t>{0, 0, 1, 1});
    EXPECT_EQ(L.exterior_of[0], (std::vector<index_t>{0}));
    EXPECT_EQ(L.exterior_of[1], (std::vector<index_t>{3}));
    expect_valid_layout(A, L);
}

TEST(ClassifyAndOrder, LayoutInvariantsOnRandomPartitions) {
    for (unsigned seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        const CsrMatrix A = test::random_dd(60, 3, rng);
        std::uniform_int_distribution<index_t> dom(0, 4);
        std::vector<index_t> owner(60);
        for (auto& d : owner) d = dom(rng);
        expect_valid_layout(A, classify_and_order(A, owner));
    }
}

TEST(ClassifyAndOrder, IdempotentOnPermutedMatrix) {
    const auto A = poisson2d(9, 7);
    const auto owner = partition(A, 4, GridDims{9, 7, 1});
    const auto L = classify_and_order(A, owner);
    const auto B = permute_symmetric(A, L.global_perm);
    std::vector<index_t> owner_b(owner.size());
    for (index_t i = 0; i < L.n; ++i) owner_b[L.global_perm(i)] = owner[i];
    const auto L2 = classify_and_order(B, owner_b);
    EXPECT_EQ(L2.global_perm, Permutation::identity(L.n));
    EXPECT_EQ(L2.n_interior, L.n_interior);
    for (index_t d = 0; d < L.p; ++d) {
        EXPECT_EQ(L2.interior_of[d].size(), L.interior_of[d].size());
        EXPECT_EQ(L2.exterior_of[d].size(), L.exterior_of[d].size());
    }
}

TEST(Rcm, TrivialAndValid) {
    EXPECT_EQ(rcm(CsrMatrix::identity(1)), Permutation::identity(1));
    std::mt19937_64 rng(1);
    const auto A = test::random_dd(50, 3, rng);
    const auto p = rcm(A);
    std::vector<index_t> f(p.forward().begin(), p.forward().end());
    std::sort(f.begin(), f.end());
    for (index_t i = 0; i < 50; ++i) EXPECT_EQ(f[i], i);
}

TEST(Rcm, RelabeledPathGetsBandwidthOne) {
    // path whose labels run 0, 5, 1, 4, 2, 3 along the chain
    const std::vector<index_t> chain{0, 5, 1, 4, 2, 3};
    std::vector<Triplet> t;
    for (index_t i = 0; i < 6; ++i) t.push_back({i, i, 2.0});
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        t.push_back({chain[k], chain[k + 1], -1.0});
        t.push_back({chain[k + 1], chain[k], -1.0});
    }
    const auto A = CsrMatrix::from_triplets(6, 6, std::move(t));
    EXPECT_GT(bandwidth(A), 1);
    EXPECT_EQ(bandwidth(permute_symmetric(A, rcm(A))), 1);
}

TEST(Rcm, DoesNotIncreaseBandwidthOnPathLikeGraphs) {
    for (unsigned seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const index_t n = 40;
        std::vector<index_t> labels(n);
        std::iota(labels.begin(), labels.end(), 0);
        std::shuffle(labels.begin(), labels.end(), rng);
        std::uniform_int_distribution<index_t> span(2, 4);
        std::vector<Triplet> t;
        for (index_t i = 0; i < n; ++i) t.push_back({i, i, 4.0});
        for (index_t k = 0; k + 1 < n; ++k) {
            t.push_back({labels[k], labels[k + 1], -1.0});
            t.push_back({labels[k + 1], labels[k], -1.0});
            const index_t j = k + span(rng);
            if (j < n && (k % 5 == 0)) {
                t.push_back({labels[k], labels[j], -1.0});
                t.push_back({labels[j], labels[k], -1.0});
            }
        }
        const auto A = CsrMatrix::from_triplets(n, n, std::move(t));
        EXPECT_LE(bandwidth(permute_symmetric(A, rcm(A))), bandwidth(A)) << "seed " << seed;
    }
}

TEST(Rcm, DisconnectedComponents) {
    const auto A = CsrMatrix::from_triplets(
        4, 4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}, {0, 2, 1}, {2, 0, 1}});
    const auto p = rcm(A);
    EXPECT_EQ(p.size(), 4);
    EXPECT_LE(bandwidth(permute_symmetric(A, p)), 1);
}

} // namespace
} // namespace ddilu
