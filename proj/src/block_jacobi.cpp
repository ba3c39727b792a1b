#include "ddilu/precond.hpp"
#include "ddilu/sparse_ops.hpp"

#include "parallel.hpp"

#include <cmath>

namespace ddilu {

namespace {

/// A_i with sum_{j != i} sum_l |(E_ij)_{k,l}| added to each diagonal entry.
CsrMatrix l1_shifted(const CsrMatrix& A, const DomainLayout& layout, const LocalDomain& dom,
                     index_t d) {
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(dom.A.nnz() + dom.size()));
    for (index_t i = 0; i < dom.A.n_rows(); ++i) {
        const auto row = dom.A.row(i);
        for (std::size_t t = 0; t < row.size(); ++t) {
            entries.push_back({i, row.cols[t], row.vals[t]});
        }
        double off = 0.0;
        const auto grow = A.row(dom.nodes[i]);
        for (std::size_t t = 0; t < grow.size(); ++t) {
            if (layout.owner[grow.cols[t]] != d) {
                off += std::fabs(grow.vals[t]);
            }
        }
        entries.push_back({i, i, off});
    }
    return CsrMatrix::from_triplets(dom.size(), dom.size(), std::move(entries));
}

} // namespace

BlockJacobiIlu::BlockJacobiIlu(const CsrMatrix& A, const DomainLayout& layout,
                               const Options& options)
    : n_(A.n_rows()), threads_(options.threads) {
    domains_ = build_local_domains(A, layout, threads_);
    if (options.variant == Variant::l1) {
        shifted_.resize(domains_.size());
    }
    factors_.resize(domains_.size());
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        if (!shifted_.empty()) {
            shifted_[d] = l1_shifted(A, layout, domains_[d], d);
        }
        factors_[d] = factorize(factored_matrix(d), options.fill);
    });
}

void BlockJacobiIlu::apply(std::span<const double> r, std::span<double> z) const {
    if (r.size() != static_cast<std::size_t>(n_) || z.size() != r.size()) {
        throw DimensionError("BlockJacobiIlu::apply: length mismatch");
    }
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        const auto& nodes = domains_[d].nodes;
        std::vector<double> x(nodes.size());
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            x[k] = r[nodes[k]];
        }
        factors_[d].solve_inplace(x);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            z[nodes[k]] = x[k];
        }
    });
}

} // namespace ddilu
