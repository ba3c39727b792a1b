// Row-wise elimination engines shared by the factorization entry points.

#ifndef DDILU_SRC_FACTOR_ENGINE_HPP
#define DDILU_SRC_FACTOR_ENGINE_HPP

#include "ddilu/factor.hpp"

namespace ddilu::detail {

struct EngineOutput {
    CsrMatrix L;
    CsrMatrix U;
    CsrMatrix S;  // rows >= snapshot_from, captured before any pivot >= snapshot_from
    index_t perturbed = 0;
};

struct FactorSink {
    std::vector<index_t> l_ptr, l_col;
    std::vector<double> l_val;
    std::vector<index_t> u_ptr, u_col;
    std::vector<double> u_val;
    std::vector<index_t> s_ptr, s_col;
    std::vector<double> s_val;

    void begin(index_t n, index_t snapshot_from);
    EngineOutput finish(index_t perturbed) &&;

private:
    index_t n_ = 0;
    index_t snap_ = 0;
};

double safeguard_pivot(double pivot, double row_norm, index_t& counter);

CsrMatrix pattern_with_diagonal(const CsrMatrix& A);

/// IKJ elimination confined to the pattern of P (which must contain the
/// diagonal and carries A's values). With milu set, dropped updates are
/// folded into the pivot so that (L U) y = A y - w.
EngineOutput factor_on_pattern(const CsrMatrix& P, const CsrMatrix& A, const MiluTarget* milu,
                               index_t snapshot_from);

EngineOutput ilut_engine(const CsrMatrix& A, double tau, index_t maxfill, index_t snapshot_from);

} // namespace ddilu::detail

#endif // DDILU_SRC_FACTOR_ENGINE_HPP
