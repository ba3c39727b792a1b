#include "ddilu/csr_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ddilu {

CsrMatrix::CsrMatrix(index_t n_rows, index_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), row_ptr_(static_cast<std::size_t>(n_rows) + 1, 0) {
    if (n_rows < 0 || n_cols < 0) {
        throw DimensionError("CsrMatrix: negative dimension");
    }
}

CsrMatrix::CsrMatrix(index_t n_rows, index_t n_cols, std::vector<index_t> row_ptr,
                     std::vector<index_t> col_idx, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    validate();
}

void CsrMatrix::validate() const {
    if (n_rows_ < 0 || n_cols_ < 0) {
        throw DimensionError("CsrMatrix: negative dimension");
    }
    if (row_ptr_.size() != static_cast<std::size_t>(n_rows_) + 1 || row_ptr_.front() != 0) {
        throw std::invalid_argument("CsrMatrix: malformed row_ptr");
    }
    if (col_idx_.size() != values_.size() ||
        static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size()) {
        throw std::invalid_argument("CsrMatrix: row_ptr/col_idx/values length mismatch");
    }
    for (index_t i = 0; i < n_rows_; ++i) {
        if (row_ptr_[i + 1] < row_ptr_[i]) {
            throw std::invalid_argument("CsrMatrix: row_ptr decreases at row " + std::to_string(i));
        }
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const index_t c = col_idx_[k];
            if (c < 0 || c >= n_cols_) {
                throw std::out_of_range("CsrMatrix: column index out of range in row " +
                                        std::to_string(i));
            }
            if (k > row_ptr_[i] && col_idx_[k - 1] >= c) {
                throw std::invalid_argument("CsrMatrix: columns not strictly increasing in row " +
                                            std::to_string(i));
            }
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(index_t n_rows, index_t n_cols, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols) {
            throw std::out_of_range("CsrMatrix::from_triplets: entry out of range");
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<index_t> row_ptr(static_cast<std::size_t>(n_rows) + 1, 0);
    std::vector<index_t> col_idx;
    std::vector<double> values;
    col_idx.reserve(entries.size());
    values.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& t = entries[k];
        if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
            values.back() += t.value;
            continue;
        }
        col_idx.push_back(t.col);
        values.push_back(t.value);
        ++row_ptr[static_cast<std::size_t>(t.row) + 1];
    }
    std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
    return {n_rows, n_cols, std::move(row_ptr), std::move(col_idx), std::move(values)};
}

CsrMatrix CsrMatrix::identity(index_t n) {
    std::vector<index_t> row_ptr(static_cast<std::size_t>(n) + 1);
    std::vector<index_t> col_idx(static_cast<std::size_t>(n));
    std::iota(row_ptr.begin(), row_ptr.end(), 0);
    std::iota(col_idx.begin(), col_idx.end(), 0);
    return {n, n, std::move(row_ptr), std::move(col_idx),
            std::vector<double>(static_cast<std::size_t>(n), 1.0)};
}

index_t CsrMatrix::find(index_t i, index_t j) const {
    const auto first = col_idx_.begin() + row_ptr_[i];
    const auto last = col_idx_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) {
        return -1;
    }
    return static_cast<index_t>(it - col_idx_.begin());
}

double CsrMatrix::at(index_t i, index_t j) const {
    const index_t k = find(i, j);
    return k < 0 ? 0.0 : values_[k];
}

Permutation Permutation::identity(index_t n) {
    std::vector<index_t> f(static_cast<std::size_t>(n));
    std::iota(f.begin(), f.end(), 0);
    return from_forward(std::move(f));
}

Permutation Permutation::from_forward(std::vector<index_t> forward) {
    const auto n = forward.size();
    std::vector<index_t> inverse(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const index_t t = forward[i];
        if (t < 0 || static_cast<std::size_t>(t) >= n || inverse[t] != -1) {
            throw std::invalid_argument("Permutation: not a bijection");
        }
        inverse[t] = static_cast<index_t>(i);
    }
    Permutation p;
    p.forward_ = std::move(forward);
    p.inverse_ = std::move(inverse);
    return p;
}

Permutation Permutation::from_inverse(std::vector<index_t> inverse) {
    return from_forward(std::move(inverse)).inverted();
}

Permutation Permutation::inverted() const {
    Permutation p;
    p.forward_ = inverse_;
    p.inverse_ = forward_;
    return p;
}

std::vector<double> Permutation::apply(std::span<const double> in) const {
    if (in.size() != forward_.size()) {
        throw DimensionError("Permutation::apply: length mismatch");
    }
    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[forward_[i]] = in[i];
    }
    return out;
}

std::vector<double> Permutation::apply_inverse(std::span<const double> in) const {
    if (in.size() != forward_.size()) {
        throw DimensionError("Permutation::apply_inverse: length mismatch");
    }
    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = in[forward_[i]];
    }
    return out;
}

} // namespace ddilu
