/// @file csr_matrix.hpp
/// @brief Compressed sparse row storage and index permutations.

#ifndef DDILU_CSR_MATRIX_HPP
#define DDILU_CSR_MATRIX_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ddilu {

using index_t = std::int32_t;

/// Thrown when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by triangular solves that meet a zero pivot.
class SingularFactorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Read-only view of one stored row.
struct RowView {
    std::span<const index_t> cols;
    std::span<const double> vals;

    std::size_t size() const { return cols.size(); }
};

/// CSR matrix with strictly increasing column indices in every row.
///
/// Explicit zeros are legal entries. Construction validates the layout,
/// so every live instance satisfies the CSR invariants.
class CsrMatrix {
public:
    CsrMatrix() : row_ptr_(1, 0) {}

    /// Empty-pattern matrix of the given shape.
    CsrMatrix(index_t n_rows, index_t n_cols);

    CsrMatrix(index_t n_rows, index_t n_cols, std::vector<index_t> row_ptr,
              std::vector<index_t> col_idx, std::vector<double> values);

    /// Builds from unordered triplets; duplicate (row, col) entries are summed.
    static CsrMatrix from_triplets(index_t n_rows, index_t n_cols,
                                   std::vector<Triplet> entries);

    static CsrMatrix identity(index_t n);

    index_t n_rows() const { return n_rows_; }
    index_t n_cols() const { return n_cols_; }
    index_t nnz() const { return static_cast<index_t>(values_.size()); }
    bool is_square() const { return n_rows_ == n_cols_; }

    std::span<const index_t> row_ptr() const { return row_ptr_; }
    std::span<const index_t> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// Values may be rewritten in place; the pattern is fixed.
    std::span<double> values_mut() { return values_; }

    RowView row(index_t i) const {
        const auto b = static_cast<std::size_t>(row_ptr_[i]);
        const auto e = static_cast<std::size_t>(row_ptr_[i + 1]);
        return {std::span<const index_t>(col_idx_).subspan(b, e - b),
                std::span<const double>(values_).subspan(b, e - b)};
    }

    /// Stored value at (i, j), or 0 when (i, j) is outside the pattern.
    double at(index_t i, index_t j) const;

    /// Position of (i, j) in col_idx/values, or -1.
    index_t find(index_t i, index_t j) const;

    bool operator==(const CsrMatrix& other) const = default;

private:
    void validate() const;

    index_t n_rows_ = 0;
    index_t n_cols_ = 0;
    std::vector<index_t> row_ptr_;
    std::vector<index_t> col_idx_;
    std::vector<double> values_;
};

/// Bijection on [0, n). forward maps old index to new, inverse maps back.
class Permutation {
public:
    Permutation() = default;

    static Permutation identity(index_t n);
    static Permutation from_forward(std::vector<index_t> forward);
    /// Builds from a new-to-old listing (new position k holds old index order[k]).
    static Permutation from_inverse(std::vector<index_t> inverse);

    index_t size() const { return static_cast<index_t>(forward_.size()); }
    std::span<const index_t> forward() const { return forward_; }
    std::span<const index_t> inverse() const { return inverse_; }
    index_t operator()(index_t old_index) const { return forward_[old_index]; }

    Permutation inverted() const;

    /// out[forward(i)] = in[i]
    std::vector<double> apply(std::span<const double> in) const;
    /// out[i] = in[forward(i)]
    std::vector<double> apply_inverse(std::span<const double> in) const;

    bool operator==(const Permutation& other) const = default;

private:
    std::vector<index_t> forward_;
    std::vector<index_t> inverse_;
};

} // namespace ddilu

#endif // DDILU_CSR_MATRIX_HPP
