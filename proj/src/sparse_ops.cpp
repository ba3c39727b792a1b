#include "ddilu/sparse_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ddilu {

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x) {
    std::vector<double> y(static_cast<std::size_t>(A.n_rows()));
    spmv(A, x, y);
    return y;
}

void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
    if (x.size() != static_cast<std::size_t>(A.n_cols()) ||
        y.size() != static_cast<std::size_t>(A.n_rows())) {
        throw DimensionError("spmv: dimension mismatch");
    }
    const auto rp = A.row_ptr();
    const auto ci = A.col_idx();
    const auto va = A.values();
    for (index_t i = 0; i < A.n_rows(); ++i) {
        double s = 0.0;
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            s += va[k] * x[ci[k]];
        }
        y[i] = s;
    }
}

void spmv_add(double alpha, const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
    if (x.size() != static_cast<std::size_t>(A.n_cols()) ||
        y.size() != static_cast<std::size_t>(A.n_rows())) {
        throw DimensionError("spmv_add: dimension mismatch");
    }
    const auto rp = A.row_ptr();
    const auto ci = A.col_idx();
    const auto va = A.values();
    for (index_t i = 0; i < A.n_rows(); ++i) {
        double s = 0.0;
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            s += va[k] * x[ci[k]];
        }
        y[i] += alpha * s;
    }
}

void tri_solve_lower_inplace(const CsrMatrix& L, std::span<double> x, bool unit_diag) {
    if (!L.is_square() || x.size() != static_cast<std::size_t>(L.n_rows())) {
        throw DimensionError("tri_solve_lower: dimension mismatch");
    }
    const auto rp = L.row_ptr();
    const auto ci = L.col_idx();
    const auto va = L.values();
    for (index_t i = 0; i < L.n_rows(); ++i) {
        double s = x[i];
        index_t k = rp[i];
        for (; k < rp[i + 1] && ci[k] < i; ++k) {
            s -= va[k] * x[ci[k]];
        }
        if (k < rp[i + 1] && ci[k] > i) {
            throw std::invalid_argument("tri_solve_lower: entry above the diagonal in row " +
                                        std::to_string(i));
        }
        if (unit_diag) {
            x[i] = s;
        } else {
            if (k == rp[i + 1] || va[k] == 0.0) {
                throw SingularFactorError("tri_solve_lower: zero diagonal in row " +
                                          std::to_string(i));
            }
            x[i] = s / va[k];
        }
    }
}

std::vector<double> tri_solve_lower(const CsrMatrix& L, std::span<const double> b, bool unit_diag) {
    std::vector<double> x(b.begin(), b.end());
    tri_solve_lower_inplace(L, x, unit_diag);
    return x;
}

void tri_solve_upper_inplace(const CsrMatrix& U, std::span<double> x) {
    if (!U.is_square() || x.size() != static_cast<std::size_t>(U.n_rows())) {
        throw DimensionError("tri_solve_upper: dimension mismatch");
    }
    const auto rp = U.row_ptr();
    const auto ci = U.col_idx();
    const auto va = U.values();
    for (index_t i = U.n_rows() - 1; i >= 0; --i) {
        const index_t b = rp[i];
        if (b == rp[i + 1] || ci[b] != i) {
            if (b < rp[i + 1] && ci[b] < i) {
                throw std::invalid_argument("tri_solve_upper: entry below the diagonal in row " +
                                            std::to_string(i));
            }
            throw SingularFactorError("tri_solve_upper: missing diagonal in row " +
                                      std::to_string(i));
        }
        if (va[b] == 0.0) {
            throw SingularFactorError("tri_solve_upper: zero diagonal in row " + std::to_string(i));
        }
        double s = x[i];
        for (index_t k = b + 1; k < rp[i + 1]; ++k) {
            s -= va[k] * x[ci[k]];
        }
        x[i] = s / va[b];
    }
}

std::vector<double> tri_solve_upper(const CsrMatrix& U, std::span<const double> b) {
    std::vector<double> x(b.begin(), b.end());
    tri_solve_upper_inplace(U, x);
    return x;
}

CsrMatrix permute_symmetric(const CsrMatrix& A, const Permutation& p) {
    if (!A.is_square()) {
        throw DimensionError("permute_symmetric: matrix is not square");
    }
    if (p.size() != A.n_rows()) {
        throw DimensionError("permute_symmetric: permutation size mismatch");
    }
    const index_t n = A.n_rows();
    const auto inv = p.inverse();
    std::vector<index_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    for (index_t r = 0; r < n; ++r) {
        const index_t old = inv[r];
        row_ptr[r + 1] = row_ptr[r] + (A.row_ptr()[old + 1] - A.row_ptr()[old]);
    }
    std::vector<index_t> col_idx(static_cast<std::size_t>(A.nnz()));
    std::vector<double> values(static_cast<std::size_t>(A.nnz()));
    std::vector<std::pair<index_t, double>> buf;
    for (index_t r = 0; r < n; ++r) {
        const auto row = A.row(inv[r]);
        buf.clear();
        for (std::size_t k = 0; k < row.size(); ++k) {
            buf.emplace_back(p(row.cols[k]), row.vals[k]);
        }
        std::sort(buf.begin(), buf.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k < buf.size(); ++k) {
            col_idx[row_ptr[r] + k] = buf[k].first;
            values[row_ptr[r] + k] = buf[k].second;
        }
    }
    return {n, n, std::move(row_ptr), std::move(col_idx), std::move(values)};
}

namespace {

void check_index_set(std::span<const index_t> s, index_t bound, const char* what) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] < 0 || s[k] >= bound) {
            throw std::out_of_range(std::string("extract_block: ") + what + " index out of range");
        }
        if (k > 0 && s[k - 1] >= s[k]) {
            throw std::invalid_argument(std::string("extract_block: ") + what +
                                        " set not strictly increasing");
        }
    }
}

} // namespace

CsrMatrix extract_block(const CsrMatrix& A, std::span<const index_t> rows,
                        std::span<const index_t> cols) {
    check_index_set(rows, A.n_rows(), "row");
    check_index_set(cols, A.n_cols(), "column");
    std::vector<index_t> col_map(static_cast<std::size_t>(A.n_cols()), -1);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        col_map[cols[k]] = static_cast<index_t>(k);
    }
    std::vector<index_t> row_ptr(rows.size() + 1, 0);
    std::vector<index_t> col_idx;
    std::vector<double> values;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto row = A.row(rows[r]);
        for (std::size_t k = 0; k < row.size(); ++k) {
            const index_t c = col_map[row.cols[k]];
            if (c >= 0) {
                col_idx.push_back(c);
                values.push_back(row.vals[k]);
            }
        }
        row_ptr[r + 1] = static_cast<index_t>(col_idx.size());
    }
    // cols is sorted, so mapped columns stay increasing.
    return {static_cast<index_t>(rows.size()), static_cast<index_t>(cols.size()),
            std::move(row_ptr), std::move(col_idx), std::move(values)};
}

CsrMatrix sparse_matmul(const CsrMatrix& A, const CsrMatrix& B) {
    if (A.n_cols() != B.n_rows()) {
        throw DimensionError("sparse_matmul: inner dimensions differ");
    }
    const index_t n = A.n_rows();
    const index_t m = B.n_cols();
    std::vector<index_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<index_t> col_idx;
    std::vector<double> values;
    std::vector<index_t> marker(static_cast<std::size_t>(m), -1);
    std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
    std::vector<index_t> touched;
    for (index_t i = 0; i < n; ++i) {
        touched.clear();
        const auto arow = A.row(i);
        for (std::size_t ka = 0; ka < arow.size(); ++ka) {
            const auto brow = B.row(arow.cols[ka]);
            const double a = arow.vals[ka];
            for (std::size_t kb = 0; kb < brow.size(); ++kb) {
                const index_t j = brow.cols[kb];
                if (marker[j] != i) {
                    marker[j] = i;
                    acc[j] = 0.0;
                    touched.push_back(j);
                }
                acc[j] += a * brow.vals[kb];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (index_t j : touched) {
            col_idx.push_back(j);
            values.push_back(acc[j]);
        }
        row_ptr[i + 1] = static_cast<index_t>(col_idx.size());
    }
    return {n, m, std::move(row_ptr), std::move(col_idx), std::move(values)};
}

CsrMatrix transpose(const CsrMatrix& A) {
    const index_t n = A.n_rows();
    const index_t m = A.n_cols();
    std::vector<index_t> row_ptr(static_cast<std::size_t>(m) + 1, 0);
    for (index_t c : A.col_idx()) {
        ++row_ptr[c + 1];
    }
    std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
    std::vector<index_t> next(row_ptr.begin(), row_ptr.end() - 1);
    std::vector<index_t> col_idx(static_cast<std::size_t>(A.nnz()));
    std::vector<double> values(static_cast<std::size_t>(A.nnz()));
    for (index_t i = 0; i < n; ++i) {
        const auto row = A.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            const index_t pos = next[row.cols[k]]++;
            col_idx[pos] = i;
            values[pos] = row.vals[k];
        }
    }
    return {m, n, std::move(row_ptr), std::move(col_idx), std::move(values)};
}

CsrMatrix symmetrized_pattern(const CsrMatrix& A) {
    if (!A.is_square()) {
        throw DimensionError("symmetrized_pattern: matrix is not square");
    }
    const index_t n = A.n_rows();
    const CsrMatrix At = transpose(A);
    std::vector<index_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<index_t> col_idx;
    col_idx.reserve(static_cast<std::size_t>(A.nnz()) * 2);
    for (index_t i = 0; i < n; ++i) {
        const auto a = A.row(i).cols;
        const auto b = At.row(i).cols;
        std::size_t ia = 0;
        std::size_t ib = 0;
        while (ia < a.size() || ib < b.size()) {
            index_t c;
            if (ib == b.size() || (ia < a.size() && a[ia] < b[ib])) {
                c = a[ia++];
            } else if (ia == a.size() || b[ib] < a[ia]) {
                c = b[ib++];
            } else {
                c = a[ia++];
                ++ib;
            }
            if (c != i) {
                col_idx.push_back(c);
            }
        }
        row_ptr[i + 1] = static_cast<index_t>(col_idx.size());
    }
    std::vector<double> values(col_idx.size(), 1.0);
    return {n, n, std::move(row_ptr), std::move(col_idx), std::move(values)};
}

index_t bandwidth(const CsrMatrix& A) {
    index_t bw = 0;
    for (index_t i = 0; i < A.n_rows(); ++i) {
        for (index_t c : A.row(i).cols) {
            bw = std::max(bw, static_cast<index_t>(std::abs(c - i)));
        }
    }
    return bw;
}

double row_norm_inf(const CsrMatrix& A, index_t i) {
    double m = 0.0;
    for (double v : A.row(i).vals) {
        m = std::fmax(m, std::fabs(v));
    }
    return m;
}

double row_norm2(const CsrMatrix& A, index_t i) {
    double s = 0.0;
    for (double v : A.row(i).vals) {
        s += v * v;
    }
    return std::sqrt(s);
}

} // namespace ddilu
