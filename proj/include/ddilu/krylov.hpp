/// @file krylov.hpp
/// @brief Right-preconditioned restarted GMRES and flexible GMRES.

#ifndef DDILU_KRYLOV_HPP
#define DDILU_KRYLOV_HPP

#include <functional>
#include <span>
#include <vector>

namespace ddilu {

/// out = Op(in). Input and output never alias.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct KrylovConfig {
    int restart = 50;
    int max_iters = 20000;
    double rtol = 1e-8;
    bool record_history = true;
};

/// Happy-breakdown threshold on the Arnoldi candidate norm.
inline constexpr double kArnoldiBreakdown = 1e-14;

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    /// ||b - A x_k|| / ||b|| for k = 0..iterations. Inside a restart cycle the
    /// entries are the Givens estimates; x_0 and every restart are recomputed
    /// from scratch.
    std::vector<double> residual_history;
    /// Index into residual_history where each restart cycle begins.
    std::vector<int> cycle_starts;
    double final_relres = 0.0;  // recomputed from scratch at exit
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

/// Restarted GMRES(m), modified Gram-Schmidt Arnoldi, Givens least squares.
/// M may be empty (no preconditioner). x0 may be empty (zero guess).
SolveResult gmres(const LinearOperator& A, const LinearOperator& M, std::span<const double> b,
                  std::span<const double> x0, const KrylovConfig& cfg);

/// Flexible GMRES(m): stores M(v_k) for every Arnoldi vector, so M may change
/// from one application to the next.
SolveResult fgmres(const LinearOperator& A, const LinearOperator& M, std::span<const double> b,
                   std::span<const double> x0, const KrylovConfig& cfg);

/// Exactly `steps` GMRES iterations from a zero guess, no restart and no
/// tolerance test (only a happy breakdown ends the loop early). Used as an
/// inner solver inside preconditioners. M may be empty.
std::vector<double> gmres_fixed_steps(const LinearOperator& A, const LinearOperator& M,
                                      std::span<const double> b, int steps);

} // namespace ddilu

#endif // DDILU_KRYLOV_HPP
