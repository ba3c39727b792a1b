#include "ddilu/factor.hpp"
#include "ddilu/sparse_ops.hpp"

#include "factor_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace ddilu {

namespace detail {

namespace {

/// Keeps the `cap` largest-magnitude columns of `cand` (ties: smaller column),
/// returned in ascending column order.
void keep_largest(std::vector<index_t>& cand, const std::vector<double>& w, index_t cap) {
    const auto better = [&](index_t a, index_t b) {
        const double fa = std::fabs(w[a]);
        const double fb = std::fabs(w[b]);
        return fa != fb ? fa > fb : a < b;
    };
    if (static_cast<index_t>(cand.size()) > cap) {
        std::nth_element(cand.begin(), cand.begin() + cap, cand.end(), better);
        cand.resize(static_cast<std::size_t>(cap));
    }
    std::sort(cand.begin(), cand.end());
}

} // namespace

EngineOutput ilut_engine(const CsrMatrix& A, double tau, index_t maxfill, index_t snapshot_from) {
    if (!A.is_square()) {
        throw DimensionError("ilut: matrix is not square");
    }
    if (!(tau >= 0.0) || maxfill < 1) {
        throw std::invalid_argument("ilut: need tau >= 0 and maxfill >= 1");
    }
    const index_t n = A.n_rows();
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    std::vector<index_t> marker(static_cast<std::size_t>(n), -1);
    std::vector<index_t> nz;
    std::vector<index_t> lower;
    std::vector<index_t> upper;
    std::priority_queue<index_t, std::vector<index_t>, std::greater<>> pending;
    FactorSink sink;
    sink.begin(n, snapshot_from);
    index_t perturbed = 0;

    for (index_t i = 0; i < n; ++i) {
        nz.clear();
        const auto touch = [&](index_t j, double v) {
            marker[j] = i;
            w[j] = v;
            nz.push_back(j);
            if (j < i) {
                pending.push(j);
            }
        };
        const auto row = A.row(i);
        for (std::size_t t = 0; t < row.size(); ++t) {
            touch(row.cols[t], row.vals[t]);
        }
        if (marker[i] != i) {
            touch(i, 0.0);
        }
        const double norm = row_norm2(A, i);
        const double threshold = norm > 0.0 ? tau * norm : 0.0;

        bool snapped = i < snapshot_from;
        const auto snapshot = [&] {
            std::vector<index_t> cols;
            for (index_t j : nz) {
                if (j >= snapshot_from) {
                    cols.push_back(j);
                }
            }
            std::sort(cols.begin(), cols.end());
            for (index_t j : cols) {
                sink.s_col.push_back(j - snapshot_from);
                sink.s_val.push_back(w[j]);
            }
            sink.s_ptr.push_back(static_cast<index_t>(sink.s_col.size()));
            snapped = true;
        };

        while (!pending.empty()) {
            const index_t k = pending.top();
            pending.pop();
            if (!snapped && k >= snapshot_from) {
                snapshot();
            }
            const index_t ub = sink.u_ptr[k];
            const double l = w[k] / sink.u_val[ub];
            w[k] = l;
            if (std::fabs(l) < threshold) {
                continue;
            }
            for (index_t q = ub + 1; q < sink.u_ptr[k + 1]; ++q) {
                const index_t j = sink.u_col[q];
                if (marker[j] != i) {
                    touch(j, 0.0);
                }
                w[j] -= l * sink.u_val[q];
            }
        }
        if (!snapped) {
            snapshot();
        }

        lower.clear();
        upper.clear();
        for (index_t j : nz) {
            if (j != i && std::fabs(w[j]) >= threshold) {
                (j < i ? lower : upper).push_back(j);
            }
        }
        keep_largest(lower, w, maxfill);
        keep_largest(upper, w, maxfill);
        for (index_t j : lower) {
            sink.l_col.push_back(j);
            sink.l_val.push_back(w[j]);
        }
        sink.l_ptr.push_back(static_cast<index_t>(sink.l_col.size()));
        sink.u_col.push_back(i);
        sink.u_val.push_back(safeguard_pivot(w[i], row_norm_inf(A, i), perturbed));
        for (index_t j : upper) {
            sink.u_col.push_back(j);
            sink.u_val.push_back(w[j]);
        }
        sink.u_ptr.push_back(static_cast<index_t>(sink.u_col.size()));
    }
    return std::move(sink).finish(perturbed);
}

} // namespace detail

IluFactors ilut(const CsrMatrix& A, double tau, index_t maxfill) {
    auto out = detail::ilut_engine(A, tau, maxfill, A.n_rows());
    return {std::move(out.L), std::move(out.U), FillRule::ilut(tau, maxfill), out.perturbed};
}

} // namespace ddilu
