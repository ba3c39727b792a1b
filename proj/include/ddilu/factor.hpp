/// @file factor.hpp
/// @brief Incomplete LU factorizations: ILU(0), ILU(k), ILUT, MILU(0), and
/// the partial ILU that leaves an approximate Schur complement behind.

#ifndef DDILU_FACTOR_HPP
#define DDILU_FACTOR_HPP

#include "ddilu/csr_matrix.hpp"

#include <span>
#include <string>
#include <vector>

namespace ddilu {

enum class FactorKind { ilu0, iluk, ilut, milu0 };

struct FillRule {
    FactorKind kind = FactorKind::ilu0;
    int level = 0;         // ILU(k)
    double tau = 0.0;      // ILUT drop tolerance
    index_t maxfill = 0;   // ILUT per-row cap, applied to L and U separately

    static FillRule ilu0() { return {}; }
    static FillRule iluk(int k) { return {FactorKind::iluk, k, 0.0, 0}; }
    static FillRule ilut(double tau, index_t maxfill) { return {FactorKind::ilut, 0, tau, maxfill}; }
    static FillRule milu0() { return {FactorKind::milu0, 0, 0.0, 0}; }

    /// "ilu0", "iluk:K", "ilut:TAU,MAXFILL" or "milu0".
    std::string name() const;
    /// Inverse of name(); throws std::invalid_argument on bad input.
    static FillRule parse(const std::string& text);

    bool operator==(const FillRule&) const = default;
};

/// Relative pivot threshold: a pivot below kPivotSafeguard * ||A(i,:)||_inf
/// is replaced by sign(u_ii) * kPivotSafeguard * ||A(i,:)||_inf.
inline constexpr double kPivotSafeguard = 1e-6;

/// L is unit lower triangular with the unit diagonal implicit (not stored);
/// U is upper triangular with the diagonal stored first in every row.
struct IluFactors {
    CsrMatrix L;
    CsrMatrix U;
    FillRule kind;
    index_t perturbed_pivots = 0;

    index_t size() const { return U.n_rows(); }
    /// x <- U^{-1} L^{-1} x
    void solve_inplace(std::span<double> x) const;
    std::vector<double> solve(std::span<const double> b) const;
};

/// Target of the modified factorization: (L U) y = A y - w.
/// Empty vectors select y = 1 and w = 0 (classical row-sum compensation).
struct MiluTarget {
    std::vector<double> y;
    std::vector<double> w;
};

IluFactors ilu0(const CsrMatrix& A);
IluFactors iluk(const CsrMatrix& A, int k);
IluFactors ilut(const CsrMatrix& A, double tau, index_t maxfill);
IluFactors milu0(const CsrMatrix& A, const MiluTarget& target = {});
IluFactors factorize(const CsrMatrix& A, const FillRule& rule, const MiluTarget& target = {});

/// Level-of-fill pattern for ILU(k): A's entries plus the diagonal plus fill
/// of level <= k. Values are A's, zero at fill positions.
CsrMatrix iluk_pattern(const CsrMatrix& A, int k);

/// Blocks of an ILU of a 2x2-ordered matrix [B F; E C].
///
///   L = [L_B 0; W L_S],  U = [U_B Z; 0 U_S]
///
/// and S_tilde, the (2,2) block left after eliminating only the interior
/// rows (the partial factorization), so that S_tilde ~ C - W Z.
struct PartialIluFactors {
    index_t n_interior = 0;
    IluFactors interior;  // L_B, U_B
    CsrMatrix W;          // ~ E U_B^{-1}, n2 x n1
    CsrMatrix Z;          // ~ L_B^{-1} F, n1 x n2
    CsrMatrix L_S;        // unit lower, diagonal implicit
    CsrMatrix U_S;
    CsrMatrix S_tilde;

    index_t n_exterior() const { return U_S.n_rows(); }
};

struct PartialIluOptions {
    FillRule rule = FillRule::ilu0();
    MiluTarget milu;              // used when rule is milu0
    double schur_drop_tol = 0.0;  // drop S_tilde entries below tol * ||S_tilde(i,:)||_2
};

/// Eliminates the first n_interior unknowns of A_local. L_S, U_S continue the
/// same elimination into the (2,2) block under the same fill rule.
PartialIluFactors partial_ilu(const CsrMatrix& A_local, index_t n_interior,
                              const PartialIluOptions& options = {});

} // namespace ddilu

#endif // DDILU_FACTOR_HPP
