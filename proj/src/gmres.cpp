#include "ddilu/krylov.hpp"

#include "ddilu/csr_matrix.hpp"
#include "ddilu/vector_ops.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ddilu {

namespace {

/// Rotation (c, s) with [c s; -s c] [a; b] = [r; 0].
void givens(double a, double b, double& c, double& s) {
    if (b == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    const double r = std::hypot(a, b);
    c = a / r;
    s = b / r;
}

/// Hessenberg least-squares state for one Arnoldi cycle.
class ArnoldiCycle {
public:
    ArnoldiCycle(std::size_t n, int m, bool flexible)
        : n_(n),
          m_(m),
          basis_(static_cast<std::size_t>(m + 1) * n),
          precond_(flexible ? static_cast<std::size_t>(m) * n : 0),
          hess_(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(m), 0.0),
          cs_(static_cast<std::size_t>(m)),
          sn_(static_cast<std::size_t>(m)),
          g_(static_cast<std::size_t>(m + 1)) {}

    std::span<double> v(int i) { return {basis_.data() + static_cast<std::size_t>(i) * n_, n_}; }
    std::span<double> z(int i) { return {precond_.data() + static_cast<std::size_t>(i) * n_, n_}; }
    double& h(int row, int col) { return hess_[static_cast<std::size_t>(col) * (m_ + 1) + row]; }

    void start(std::span<const double> r, double beta) {
        auto v0 = v(0);
        for (std::size_t i = 0; i < n_; ++i) {
            v0[i] = r[i] / beta;
        }
        std::fill(g_.begin(), g_.end(), 0.0);
        g_[0] = beta;
    }

    /// Orthogonalizes w against v_0..v_j (MGS), stores column j, applies the
    /// rotations. Returns the candidate norm h_{j+1,j} before rotation.
    double orthogonalize(int j, std::span<double> w) {
        for (int i = 0; i <= j; ++i) {
            const double hij = dot(w, v(i));
            h(i, j) = hij;
            axpy(-hij, v(i), w);
        }
        const double hn = norm2(w);
        h(j + 1, j) = hn;
        for (int i = 0; i < j; ++i) {
            const double a = h(i, j);
            const double b = h(i + 1, j);
            h(i, j) = cs_[i] * a + sn_[i] * b;
            h(i + 1, j) = -sn_[i] * a + cs_[i] * b;
        }
        givens(h(j, j), h(j + 1, j), cs_[j], sn_[j]);
        h(j, j) = cs_[j] * h(j, j) + sn_[j] * h(j + 1, j);
        h(j + 1, j) = 0.0;
        g_[j + 1] = -sn_[j] * g_[j];
        g_[j] = cs_[j] * g_[j];
        return hn;
    }

    double residual_estimate(int j) const { return std::fabs(g_[j + 1]); }

    /// Least-squares coefficients for the first k basis vectors.
    std::vector<double> coefficients(int k) {
        std::vector<double> y(static_cast<std::size_t>(k));
        for (int i = k - 1; i >= 0; --i) {
            double s = g_[i];
            for (int l = i + 1; l < k; ++l) {
                s -= h(i, l) * y[l];
            }
            y[i] = h(i, i) != 0.0 ? s / h(i, i) : 0.0;
        }
        return y;
    }

private:
    std::size_t n_;
    int m_;
    std::vector<double> basis_;
    std::vector<double> precond_;
    std::vector<double> hess_;  // column-major (m+1) x m
    std::vector<double> cs_, sn_, g_;
};

void residual(const LinearOperator& A, std::span<const double> b, std::span<const double> x,
              std::span<double> r) {
    A(x, r);
    for (std::size_t i = 0; i < b.size(); ++i) {
        r[i] = b[i] - r[i];
    }
}

SolveResult run_gmres(const LinearOperator& A, const LinearOperator& M, std::span<const double> b,
                      std::span<const double> x0, const KrylovConfig& cfg, bool flexible) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.restart < 1 || !(cfg.rtol > 0.0) || cfg.max_iters < 0) {
        throw std::invalid_argument("gmres: need restart >= 1, rtol > 0, max_iters >= 0");
    }
    const std::size_t n = b.size();
    if (!x0.empty() && x0.size() != n) {
        throw DimensionError("gmres: initial guess length mismatch");
    }
    SolveResult result;
    auto& rep = result.report;
    result.x.assign(n, 0.0);
    if (!x0.empty()) {
        std::copy(x0.begin(), x0.end(), result.x.begin());
    }
    const auto finish = [&] {
        rep.solve_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return std::move(result);
    };

    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        std::fill(result.x.begin(), result.x.end(), 0.0);
        rep.converged = true;
        rep.final_relres = 0.0;
        if (cfg.record_history) {
            rep.residual_history.push_back(0.0);
            rep.cycle_starts.push_back(0);
        }
        return finish();
    }

    std::vector<double> r(n);
    std::vector<double> w(n);
    std::vector<double> t(n);
    residual(A, b, result.x, r);
    double beta = norm2(r);
    rep.final_relres = beta / bnorm;
    if (cfg.record_history) {
        rep.residual_history.push_back(rep.final_relres);
    }
    if (rep.final_relres <= cfg.rtol) {
        rep.converged = true;
        return finish();
    }

    const int m = cfg.restart;
    ArnoldiCycle cycle(n, m, flexible);
    while (rep.iterations < cfg.max_iters && beta > 0.0) {
        if (cfg.record_history) {
            rep.cycle_starts.push_back(static_cast<int>(rep.residual_history.size()) - 1);
        }
        cycle.start(r, beta);
        int k = 0;
        while (k < m && rep.iterations < cfg.max_iters) {
            std::span<double> zk = flexible ? cycle.z(k) : std::span<double>(t);
            if (M) {
                M(cycle.v(k), zk);
            } else {
                std::copy(cycle.v(k).begin(), cycle.v(k).end(), zk.begin());
            }
            A(zk, w);
            const double hn = cycle.orthogonalize(k, w);
            ++rep.iterations;
            const double estimate = cycle.residual_estimate(k) / bnorm;
            if (cfg.record_history) {
                rep.residual_history.push_back(estimate);
            }
            ++k;
            if (hn < kArnoldiBreakdown) {
                break;
            }
            auto next = cycle.v(k);
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = w[i] / hn;
            }
            if (estimate <= cfg.rtol) {
                break;
            }
        }

        const auto y = cycle.coefficients(k);
        if (flexible) {
            for (int i = 0; i < k; ++i) {
                axpy(y[i], cycle.z(i), result.x);
            }
        } else {
            std::fill(w.begin(), w.end(), 0.0);
            for (int i = 0; i < k; ++i) {
                axpy(y[i], cycle.v(i), w);
            }
            if (M) {
                M(w, t);
            } else {
                std::copy(w.begin(), w.end(), t.begin());
            }
            axpy(1.0, t, result.x);
        }

        residual(A, b, result.x, r);
        beta = norm2(r);
        rep.final_relres = beta / bnorm;
        if (rep.final_relres <= cfg.rtol) {
            rep.converged = true;
            break;
        }
    }
    return finish();
}

} // namespace

SolveResult gmres(const LinearOperator& A, const LinearOperator& M, std::span<const double> b,
                  std::span<const double> x0, const KrylovConfig& cfg) {
    return run_gmres(A, M, b, x0, cfg, false);
}

SolveResult fgmres(const LinearOperator& A, const LinearOperator& M, std::span<const double> b,
                   std::span<const double> x0, const KrylovConfig& cfg) {
    return run_gmres(A, M, b, x0, cfg, true);
}

std::vector<double> gmres_fixed_steps(const LinearOperator& A, const LinearOperator& M,
                                      std::span<const double> b, int steps) {
    const std::size_t n = b.size();
    std::vector<double> x(n, 0.0);
    const double beta = norm2(b);
    if (n == 0 || steps < 1 || beta == 0.0) {
        return x;
    }
    ArnoldiCycle cycle(n, steps, M != nullptr);
    std::vector<double> w(n);
    std::vector<double> t(n);
    cycle.start(b, beta);
    int k = 0;
    while (k < steps) {
        std::span<double> zk = M ? cycle.z(k) : cycle.v(k);
        if (M) {
            M(cycle.v(k), zk);
        }
        A(zk, w);
        const double hn = cycle.orthogonalize(k, w);
        ++k;
        if (hn < kArnoldiBreakdown) {
            break;
        }
        auto next = cycle.v(k);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = w[i] / hn;
        }
    }
    const auto y = cycle.coefficients(k);
    for (int i = 0; i < k; ++i) {
        axpy(y[i], M ? cycle.z(i) : cycle.v(i), x);
    }
    return x;
}

} // namespace ddilu
