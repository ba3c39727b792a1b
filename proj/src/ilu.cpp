#include "ddilu/factor.hpp"

#include "ddilu/sparse_ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "factor_engine.hpp"

namespace ddilu {

std::string FillRule::name() const {
    switch (kind) {
    case FactorKind::ilu0:
        return "ilu0";
    case FactorKind::milu0:
        return "milu0";
    case FactorKind::iluk:
        return "iluk:" + std::to_string(level);
    case FactorKind::ilut: {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << "ilut:" << tau << ',' << maxfill;
        return os.str();
    }
    }
    return "unknown";
}

FillRule FillRule::parse(const std::string& text) {
    if (text == "ilu0") {
        return ilu0();
    }
    if (text == "milu0") {
        return milu0();
    }
    const auto bad = [&] { return std::invalid_argument("invalid fill rule '" + text + "'"); };
    if (text.rfind("iluk:", 0) == 0) {
        std::istringstream is(text.substr(5));
        is.imbue(std::locale::classic());
        int k = -1;
        if (!(is >> k) || k < 0 || !is.eof()) {
            throw bad();
        }
        return iluk(k);
    }
    if (text.rfind("ilut:", 0) == 0) {
        std::istringstream is(text.substr(5));
        is.imbue(std::locale::classic());
        double tau = -1.0;
        char comma = 0;
        long long maxfill = 0;
        if (!(is >> tau >> comma >> maxfill) || comma != ',' || tau < 0.0 || maxfill < 1 ||
            !is.eof()) {
            throw bad();
        }
        return ilut(tau, static_cast<index_t>(maxfill));
    }
    throw bad();
}

void IluFactors::solve_inplace(std::span<double> x) const {
    tri_solve_lower_inplace(L, x, true);
    tri_solve_upper_inplace(U, x);
}

std::vector<double> IluFactors::solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    solve_inplace(x);
    return x;
}

namespace detail {

double safeguard_pivot(double pivot, double row_norm, index_t& counter) {
    const double threshold = kPivotSafeguard * (row_norm > 0.0 ? row_norm : 1.0);
    if (std::fabs(pivot) < threshold) {
        ++counter;
        return pivot < 0.0 ? -threshold : threshold;
    }
    return pivot;
}

void FactorSink::begin(index_t n, index_t snapshot_from) {
    n_ = n;
    snap_ = snapshot_from;
    l_ptr = {0};
    u_ptr = {0};
    s_ptr = {0};
    l_col.clear();
    l_val.clear();
    u_col.clear();
    u_val.clear();
    s_col.clear();
    s_val.clear();
}

EngineOutput FactorSink::finish(index_t perturbed) && {
    EngineOutput out;
    out.L = CsrMatrix(n_, n_, std::move(l_ptr), std::move(l_col), std::move(l_val));
    out.U = CsrMatrix(n_, n_, std::move(u_ptr), std::move(u_col), std::move(u_val));
    const index_t ns = n_ - std::min(snap_, n_);
    out.S = CsrMatrix(ns, ns, std::move(s_ptr), std::move(s_col), std::move(s_val));
    out.perturbed = perturbed;
    return out;
}

CsrMatrix pattern_with_diagonal(const CsrMatrix& A) {
    const index_t n = A.n_rows();
    std::vector<index_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<index_t> col_idx;
    std::vector<double> values;
    col_idx.reserve(static_cast<std::size_t>(A.nnz() + n));
    values.reserve(static_cast<std::size_t>(A.nnz() + n));
    for (index_t i = 0; i < n; ++i) {
        const auto row = A.row(i);
        bool has_diag = false;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (!has_diag && row.cols[k] > i) {
                col_idx.push_back(i);
                values.push_back(0.0);
                has_diag = true;
            }
            has_diag = has_diag || row.cols[k] == i;
            col_idx.push_back(row.cols[k]);
            values.push_back(row.vals[k]);
        }
        if (!has_diag) {
            col_idx.push_back(i);
            values.push_back(0.0);
        }
        row_ptr[i + 1] = static_cast<index_t>(col_idx.size());
    }
    return {n, n, std::move(row_ptr), std::move(col_idx), std::move(values)};
}

EngineOutput factor_on_pattern(const CsrMatrix& P, const CsrMatrix& A, const MiluTarget* milu,
                               index_t snapshot_from) {
    const index_t n = P.n_rows();
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    std::vector<index_t> marker(static_cast<std::size_t>(n), -1);
    FactorSink sink;
    sink.begin(n, snapshot_from);
    index_t perturbed = 0;

    std::vector<double> ones;
    std::span<const double> y;
    std::span<const double> rhs;
    if (milu) {
        if (milu->y.empty()) {
            ones.assign(static_cast<std::size_t>(n), 1.0);
            y = ones;
        } else {
            y = milu->y;
        }
        rhs = milu->w;
    }

    for (index_t i = 0; i < n; ++i) {
        const auto row = P.row(i);
        for (std::size_t t = 0; t < row.size(); ++t) {
            w[row.cols[t]] = row.vals[t];
            marker[row.cols[t]] = i;
        }
        bool snapped = i < snapshot_from;
        const auto snapshot = [&] {
            for (std::size_t t = 0; t < row.size(); ++t) {
                if (row.cols[t] >= snapshot_from) {
                    sink.s_col.push_back(row.cols[t] - snapshot_from);
                    sink.s_val.push_back(w[row.cols[t]]);
                }
            }
            sink.s_ptr.push_back(static_cast<index_t>(sink.s_col.size()));
            snapped = true;
        };

        double dropped_action = 0.0;
        for (std::size_t t = 0; t < row.size(); ++t) {
            const index_t k = row.cols[t];
            if (k >= i) {
                break;
            }
            if (!snapped && k >= snapshot_from) {
                snapshot();
            }
            const index_t ub = sink.u_ptr[k];
            const index_t ue = sink.u_ptr[k + 1];
            const double l = w[k] / sink.u_val[ub];
            w[k] = l;
            for (index_t q = ub + 1; q < ue; ++q) {
                const index_t j = sink.u_col[q];
                if (marker[j] == i) {
                    w[j] -= l * sink.u_val[q];
                } else if (milu) {
                    dropped_action -= l * sink.u_val[q] * y[j];
                }
            }
        }
        if (!snapped) {
            snapshot();
        }

        std::size_t t = 0;
        for (; t < row.size() && row.cols[t] < i; ++t) {
            sink.l_col.push_back(row.cols[t]);
            sink.l_val.push_back(w[row.cols[t]]);
        }
        sink.l_ptr.push_back(static_cast<index_t>(sink.l_col.size()));

        double pivot = w[i];
        if (milu) {
            const double wi = rhs.empty() ? 0.0 : rhs[i];
            pivot += (dropped_action - wi) / y[i];
        }
        sink.u_col.push_back(i);
        sink.u_val.push_back(safeguard_pivot(pivot, row_norm_inf(A, i), perturbed));
        for (++t; t < row.size(); ++t) {
            sink.u_col.push_back(row.cols[t]);
            sink.u_val.push_back(w[row.cols[t]]);
        }
        sink.u_ptr.push_back(static_cast<index_t>(sink.u_col.size()));
    }
    return std::move(sink).finish(perturbed);
}

} // namespace detail

CsrMatrix iluk_pattern(const CsrMatrix& A, int k) {
    if (!A.is_square()) {
        throw DimensionError("iluk: matrix is not square");
    }
    if (k < 0) {
        throw std::invalid_argument("iluk: level must be nonnegative");
    }
    if (k == 0) {
        return detail::pattern_with_diagonal(A);
    }
    const index_t n = A.n_rows();
    std::vector<int> lev(static_cast<std::size_t>(n), 0);
    std::vector<index_t> marker(static_cast<std::size_t>(n), -1);
    std::vector<double> val(static_cast<std::size_t>(n), 0.0);
    // Upper-part levels of every finished row, consumed by later rows.
    std::vector<index_t> ul_ptr{0};
    std::vector<index_t> ul_col;
    std::vector<int> ul_lev;
    std::vector<index_t> row_ptr{0};
    std::vector<index_t> col_idx;
    std::vector<double> values;
    std::vector<index_t> cols;
    std::priority_queue<index_t, std::vector<index_t>, std::greater<>> pending;

    for (index_t i = 0; i < n; ++i) {
        cols.clear();
        const auto add = [&](index_t j, int level, double v) {
            marker[j] = i;
            lev[j] = level;
            val[j] = v;
            cols.push_back(j);
            if (j < i) {
                pending.push(j);
            }
        };
        const auto row = A.row(i);
        for (std::size_t t = 0; t < row.size(); ++t) {
            add(row.cols[t], 0, row.vals[t]);
        }
        if (marker[i] != i) {
            add(i, 0, 0.0);
        }
        while (!pending.empty()) {
            const index_t p = pending.top();
            pending.pop();
            const int lp = lev[p];
            for (index_t q = ul_ptr[p]; q < ul_ptr[p + 1]; ++q) {
                const index_t j = ul_col[q];
                const int nl = lp + ul_lev[q] + 1;
                if (nl > k) {
                    continue;
                }
                if (marker[j] != i) {
                    add(j, nl, 0.0);
                } else if (nl < lev[j]) {
                    lev[j] = nl;
                }
            }
        }
        std::sort(cols.begin(), cols.end());
        for (index_t j : cols) {
            col_idx.push_back(j);
            values.push_back(val[j]);
            if (j > i) {
                ul_col.push_back(j);
                ul_lev.push_back(lev[j]);
            }
        }
        row_ptr.push_back(static_cast<index_t>(col_idx.size()));
        ul_ptr.push_back(static_cast<index_t>(ul_col.size()));
    }
    return {n, n, std::move(row_ptr), std::move(col_idx), std::move(values)};
}

namespace {

IluFactors to_factors(detail::EngineOutput&& out, const FillRule& rule) {
    return {std::move(out.L), std::move(out.U), rule, out.perturbed};
}

void check_square(const CsrMatrix& A, const char* who) {
    if (!A.is_square()) {
        throw DimensionError(std::string(who) + ": matrix is not square");
    }
}

} // namespace

IluFactors ilu0(const CsrMatrix& A) {
    check_square(A, "ilu0");
    const CsrMatrix P = detail::pattern_with_diagonal(A);
    return to_factors(detail::factor_on_pattern(P, A, nullptr, A.n_rows()), FillRule::ilu0());
}

IluFactors iluk(const CsrMatrix& A, int k) {
    const CsrMatrix P = iluk_pattern(A, k);
    return to_factors(detail::factor_on_pattern(P, A, nullptr, A.n_rows()), FillRule::iluk(k));
}

namespace {

void check_milu_target(const MiluTarget& target, index_t n) {
    if (!target.y.empty()) {
        if (target.y.size() != static_cast<std::size_t>(n)) {
            throw DimensionError("milu0: target vector length mismatch");
        }
        for (double v : target.y) {
            if (v == 0.0) {
                throw std::invalid_argument("milu0: target vector has a zero entry");
            }
        }
    }
    if (!target.w.empty() && target.w.size() != static_cast<std::size_t>(n)) {
        throw DimensionError("milu0: w length mismatch");
    }
}

} // namespace

IluFactors milu0(const CsrMatrix& A, const MiluTarget& target) {
    check_square(A, "milu0");
    check_milu_target(target, A.n_rows());
    const CsrMatrix P = detail::pattern_with_diagonal(A);
    return to_factors(detail::factor_on_pattern(P, A, &target, A.n_rows()), FillRule::milu0());
}

IluFactors factorize(const CsrMatrix& A, const FillRule& rule, const MiluTarget& target) {
    switch (rule.kind) {
    case FactorKind::ilu0:
        return ilu0(A);
    case FactorKind::iluk:
        return iluk(A, rule.level);
    case FactorKind::ilut:
        return ilut(A, rule.tau, rule.maxfill);
    case FactorKind::milu0:
        return milu0(A, target);
    }
    throw std::invalid_argument("factorize: unknown fill rule");
}

namespace {

std::vector<index_t> iota_range(index_t lo, index_t hi) {
    std::vector<index_t> v(static_cast<std::size_t>(hi - lo));
    std::iota(v.begin(), v.end(), lo);
    return v;
}

CsrMatrix drop_relative(const CsrMatrix& S, double tol) {
    if (tol <= 0.0) {
        return S;
    }
    std::vector<index_t> row_ptr{0};
    std::vector<index_t> col_idx;
    std::vector<double> values;
    for (index_t i = 0; i < S.n_rows(); ++i) {
        const auto row = S.row(i);
        const double threshold = tol * row_norm2(S, i);
        for (std::size_t t = 0; t < row.size(); ++t) {
            if (row.cols[t] == i || std::fabs(row.vals[t]) >= threshold) {
                col_idx.push_back(row.cols[t]);
                values.push_back(row.vals[t]);
            }
        }
        row_ptr.push_back(static_cast<index_t>(col_idx.size()));
    }
    return {S.n_rows(), S.n_cols(), std::move(row_ptr), std::move(col_idx), std::move(values)};
}

} // namespace

PartialIluFactors partial_ilu(const CsrMatrix& A_local, index_t n_interior,
                              const PartialIluOptions& options) {
    check_square(A_local, "partial_ilu");
    const index_t n = A_local.n_rows();
    if (n_interior < 0 || n_interior > n) {
        throw std::invalid_argument("partial_ilu: n_interior out of range");
    }
    const FillRule& rule = options.rule;
    detail::EngineOutput out;
    switch (rule.kind) {
    case FactorKind::ilut:
        out = detail::ilut_engine(A_local, rule.tau, rule.maxfill, n_interior);
        break;
    case FactorKind::milu0:
        check_milu_target(options.milu, n);
        out = detail::factor_on_pattern(detail::pattern_with_diagonal(A_local), A_local,
                                        &options.milu, n_interior);
        break;
    case FactorKind::iluk:
        out = detail::factor_on_pattern(iluk_pattern(A_local, rule.level), A_local, nullptr,
                                        n_interior);
        break;
    case FactorKind::ilu0:
        out = detail::factor_on_pattern(detail::pattern_with_diagonal(A_local), A_local, nullptr,
                                        n_interior);
        break;
    }

    const auto inner = iota_range(0, n_interior);
    const auto outer = iota_range(n_interior, n);
    PartialIluFactors f;
    f.n_interior = n_interior;
    f.interior.L = extract_block(out.L, inner, inner);
    f.interior.U = extract_block(out.U, inner, inner);
    f.interior.kind = rule;
    f.interior.perturbed_pivots = out.perturbed;
    f.W = extract_block(out.L, outer, inner);
    f.Z = extract_block(out.U, inner, outer);
    f.L_S = extract_block(out.L, outer, outer);
    f.U_S = extract_block(out.U, outer, outer);
    f.S_tilde = drop_relative(out.S, options.schur_drop_tol);
    return f;
}

} // namespace ddilu
