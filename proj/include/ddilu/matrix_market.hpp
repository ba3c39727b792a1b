/// @file matrix_market.hpp
/// @brief Matrix Market coordinate I/O (`real general` and `real symmetric`).

#ifndef DDILU_MATRIX_MARKET_HPP
#define DDILU_MATRIX_MARKET_HPP

#include "ddilu/csr_matrix.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

namespace ddilu {

class MatrixMarketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Symmetric files are expanded to general storage: every off-diagonal
/// entry (i, j) also populates (j, i).
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::filesystem::path& path);

/// Always writes `coordinate real general` with 17 significant digits.
void write_matrix_market(const CsrMatrix& A, std::ostream& out);
void write_matrix_market(const CsrMatrix& A, const std::filesystem::path& path);

} // namespace ddilu

#endif // DDILU_MATRIX_MARKET_HPP
