#include "ddilu/precond.hpp"
#include "ddilu/sparse_ops.hpp"

#include "parallel.hpp"

namespace ddilu {

SchurIluPrecond::SchurIluPrecond(const CsrMatrix& A, const DomainLayout& layout,
                                 const Options& options)
    : n_(A.n_rows()),
      n_exterior_(layout.n_exterior),
      inner_iters_(options.inner_iters),
      threads_(options.threads) {
    domains_ = build_local_domains(A, layout, threads_);
    factors_.resize(domains_.size());
    PartialIluOptions po;
    po.rule = options.fill;
    po.schur_drop_tol = options.schur_drop_tol;
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        factors_[d] = partial_ilu(domains_[d].A, domains_[d].n_interior, po);
    });
}

void SchurIluPrecond::schur_matvec(std::span<const double> y, std::span<double> out) const {
    if (y.size() != static_cast<std::size_t>(n_exterior_) || out.size() != y.size()) {
        throw DimensionError("SchurIluPrecond::schur_matvec: length mismatch");
    }
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        const PartialIluFactors& f = factors_[d];
        const auto n2 = static_cast<std::size_t>(dom.n_exterior());
        std::vector<double> t(n2);
        spmv(dom.coupling, y, t);
        tri_solve_lower_inplace(f.L_S, t, true);
        tri_solve_upper_inplace(f.U_S, t);
        for (std::size_t k = 0; k < n2; ++k) {
            out[dom.exterior_offset + k] = y[dom.exterior_offset + k] + t[k];
        }
    });
}

void SchurIluPrecond::reduced_matvec(std::span<const double> y, std::span<double> out) const {
    if (y.size() != static_cast<std::size_t>(n_exterior_) || out.size() != y.size()) {
        throw DimensionError("SchurIluPrecond::reduced_matvec: length mismatch");
    }
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        const auto n2 = static_cast<std::size_t>(dom.n_exterior());
        const auto off = static_cast<std::size_t>(dom.exterior_offset);
        auto o = out.subspan(off, n2);
        spmv(factors_[d].S_tilde, y.subspan(off, n2), o);
        spmv_add(1.0, dom.coupling, y, o);
    });
}

void SchurIluPrecond::apply(std::span<const double> b, std::span<double> x) const {
    if (b.size() != static_cast<std::size_t>(n_) || x.size() != b.size()) {
        throw DimensionError("SchurIluPrecond::apply: length mismatch");
    }
    const auto p = static_cast<int>(domains_.size());
    std::vector<std::vector<double>> local(domains_.size());
    std::vector<double> g_hat(static_cast<std::size_t>(n_exterior_));

    // f' = L_B^{-1} f, g' = g - W f', g_hat = S^{-1} g'
    detail::for_each_domain(p, threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        const PartialIluFactors& f = factors_[d];
        const auto n1 = static_cast<std::size_t>(dom.n_interior);
        auto& u = local[d];
        u.resize(dom.nodes.size());
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] = b[dom.nodes[k]];
        }
        std::span<double> fi(u.data(), n1);
        std::span<double> gi(u.data() + n1, u.size() - n1);
        tri_solve_lower_inplace(f.interior.L, fi, true);
        if (gi.empty()) {
            return;
        }
        std::vector<double> wf(gi.size());
        spmv(f.W, fi, wf);
        for (std::size_t k = 0; k < gi.size(); ++k) {
            gi[k] -= wf[k];
        }
        tri_solve_lower_inplace(f.L_S, gi, true);
        tri_solve_upper_inplace(f.U_S, gi);
        std::copy(gi.begin(), gi.end(), g_hat.begin() + dom.exterior_offset);
    });

    const LinearOperator op = [this](std::span<const double> in, std::span<double> out) {
        schur_matvec(in, out);
    };
    const std::vector<double> y = gmres_fixed_steps(op, nullptr, g_hat, inner_iters_);

    // u = U_B^{-1} (f' - Z y)
    detail::for_each_domain(p, threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        const PartialIluFactors& f = factors_[d];
        const auto n1 = static_cast<std::size_t>(dom.n_interior);
        const auto n2 = static_cast<std::size_t>(dom.n_exterior());
        auto& u = local[d];
        std::span<double> fi(u.data(), n1);
        const std::span<const double> yi(y.data() + dom.exterior_offset, n2);
        if (n2 > 0) {
            std::vector<double> zy(n1);
            spmv(f.Z, yi, zy);
            for (std::size_t k = 0; k < n1; ++k) {
                fi[k] -= zy[k];
            }
        }
        tri_solve_upper_inplace(f.interior.U, fi);
        for (std::size_t k = 0; k < n1; ++k) {
            x[dom.nodes[k]] = fi[k];
        }
        for (std::size_t k = 0; k < n2; ++k) {
            x[dom.nodes[n1 + k]] = yi[k];
        }
    });
}

} // namespace ddilu
