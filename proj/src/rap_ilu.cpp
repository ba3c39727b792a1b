#include "ddilu/precond.hpp"
#include "ddilu/sparse_ops.hpp"

#include "parallel.hpp"

#include <stdexcept>

namespace ddilu {

namespace {

std::vector<double> ones_if_empty(std::vector<double> v, index_t n, const char* what) {
    if (v.empty()) {
        return std::vector<double>(static_cast<std::size_t>(n), 1.0);
    }
    if (v.size() != static_cast<std::size_t>(n)) {
        throw DimensionError(std::string("MiluVectors: wrong length for ") + what);
    }
    return v;
}

} // namespace

MiluVectors MiluVectors::consistent(const CsrMatrix& A, const DomainLayout& layout,
                                    std::vector<double> y, std::vector<double> z) {
    MiluVectors out;
    out.y = ones_if_empty(std::move(y), layout.n_interior, "y");
    out.z = ones_if_empty(std::move(z), layout.n_exterior, "z");
    out.w.assign(static_cast<std::size_t>(layout.n_interior), 0.0);
    const auto perm = layout.global_perm.forward();
    const auto value = [&](index_t node) {
        const index_t q = perm[node];
        return q < layout.n_interior ? out.y[q] : out.z[q - layout.n_interior];
    };
    for (index_t i = 0; i < layout.n; ++i) {
        const index_t q = perm[i];
        if (q >= layout.n_interior) {
            continue;
        }
        const auto row = A.row(i);
        double s = 0.0;
        for (std::size_t t = 0; t < row.size(); ++t) {
            s += row.vals[t] * value(row.cols[t]);
        }
        out.w[q] = s;
    }
    return out;
}

RapIluPrecond::RapIluPrecond(const CsrMatrix& A, const DomainLayout& layout,
                             const Options& options)
    : n_(A.n_rows()),
      n_exterior_(layout.n_exterior),
      inner_iters_(options.inner_iters),
      threads_(options.threads) {
    domains_ = build_local_domains(A, layout, threads_);
    smoother_.resize(domains_.size());
    coarse_.resize(domains_.size());

    const MiluVectors& mv = options.milu;
    const std::vector<double> y = ones_if_empty(mv.y, layout.n_interior, "y");
    const std::vector<double> z = ones_if_empty(mv.z, layout.n_exterior, "z");
    if (!mv.w.empty() && mv.w.size() != static_cast<std::size_t>(layout.n_interior)) {
        throw DimensionError("MiluVectors: wrong length for w");
    }
    const auto perm = layout.global_perm.forward();

    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        smoother_[d] = ilu0(dom.A);

        PartialIluOptions po;
        if (options.modified) {
            po.rule = FillRule::milu0();
            const auto n = static_cast<std::size_t>(dom.size());
            const auto n1 = static_cast<std::size_t>(dom.n_interior);
            po.milu.y.resize(n);
            po.milu.w.assign(n, 0.0);
            for (std::size_t k = 0; k < n1; ++k) {
                const index_t q = perm[dom.nodes[k]];
                po.milu.y[k] = y[q];
                if (!mv.w.empty()) {
                    po.milu.w[k] = mv.w[q];
                }
            }
            for (std::size_t k = n1; k < n; ++k) {
                po.milu.y[k] = z[perm[dom.nodes[k]] - layout.n_interior];
            }
            if (options.compensate_coupling && n > n1) {
                std::vector<double> ez(n - n1);
                spmv(dom.coupling, z, ez);
                for (std::size_t k = n1; k < n; ++k) {
                    po.milu.w[k] = -ez[k - n1];
                }
            }
        }
        coarse_[d] = partial_ilu(dom.A, dom.n_interior, po);
    });
}

void RapIluPrecond::prolong_interior(index_t d, std::span<const double> v_d,
                                     std::span<double> q) const {
    const PartialIluFactors& f = coarse_[d];
    spmv(f.Z, v_d, q);
    tri_solve_upper_inplace(f.interior.U, q);
    for (double& x : q) {
        x = -x;
    }
}

void RapIluPrecond::restrict_local(index_t d, std::span<double> t, std::span<double> out) const {
    const PartialIluFactors& f = coarse_[d];
    const auto n1 = static_cast<std::size_t>(f.n_interior);
    std::span<double> t_int = t.first(n1);
    tri_solve_lower_inplace(f.interior.L, t_int, true);
    std::copy(t.begin() + static_cast<std::ptrdiff_t>(n1), t.end(), out.begin());
    spmv_add(-1.0, f.W, t_int, out);
}

void RapIluPrecond::rap_matvec(std::span<const double> v, std::span<double> out) const {
    if (v.size() != static_cast<std::size_t>(n_exterior_) || out.size() != v.size()) {
        throw DimensionError("RapIluPrecond::rap_matvec: length mismatch");
    }
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        const auto n1 = static_cast<std::size_t>(dom.n_interior);
        const auto n2 = static_cast<std::size_t>(dom.n_exterior());
        const auto v_d = v.subspan(static_cast<std::size_t>(dom.exterior_offset), n2);
        // Pv restricted to domain d, then t = (A P v) on the rows of domain d
        std::vector<double> pv(n1 + n2);
        prolong_interior(d, v_d, std::span<double>(pv).first(n1));
        std::copy(v_d.begin(), v_d.end(), pv.begin() + static_cast<std::ptrdiff_t>(n1));
        std::vector<double> t(n1 + n2);
        spmv(dom.A, pv, t);
        spmv_add(1.0, dom.coupling, v, std::span<double>(t).last(n2));
        restrict_local(d, t, out.subspan(static_cast<std::size_t>(dom.exterior_offset), n2));
    });
}

void RapIluPrecond::coarse_solve(std::span<const double> v, std::span<double> out) const {
    if (v.size() != static_cast<std::size_t>(n_exterior_) || out.size() != v.size()) {
        throw DimensionError("RapIluPrecond::coarse_solve: length mismatch");
    }
    std::copy(v.begin(), v.end(), out.begin());
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        const PartialIluFactors& f = coarse_[d];
        auto o = out.subspan(static_cast<std::size_t>(domains_[d].exterior_offset),
                             static_cast<std::size_t>(f.n_exterior()));
        tri_solve_lower_inplace(f.L_S, o, true);
        tri_solve_upper_inplace(f.U_S, o);
    });
}

void RapIluPrecond::coarse_factor_matvec(std::span<const double> v, std::span<double> out) const {
    if (v.size() != static_cast<std::size_t>(n_exterior_) || out.size() != v.size()) {
        throw DimensionError("RapIluPrecond::coarse_factor_matvec: length mismatch");
    }
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        const PartialIluFactors& f = coarse_[d];
        const auto off = static_cast<std::size_t>(domains_[d].exterior_offset);
        const auto n2 = static_cast<std::size_t>(f.n_exterior());
        const auto v_d = v.subspan(off, n2);
        auto o = out.subspan(off, n2);
        std::vector<double> u(n2);
        spmv(f.U_S, v_d, u);
        std::copy(u.begin(), u.end(), o.begin());
        spmv_add(1.0, f.L_S, u, o);
    });
}

std::vector<double> RapIluPrecond::interpolate(std::span<const double> v) const {
    if (v.size() != static_cast<std::size_t>(n_exterior_)) {
        throw DimensionError("RapIluPrecond::interpolate: length mismatch");
    }
    std::vector<double> x(static_cast<std::size_t>(n_));
    detail::for_each_domain(static_cast<int>(domains_.size()), threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        const auto n1 = static_cast<std::size_t>(dom.n_interior);
        const auto n2 = static_cast<std::size_t>(dom.n_exterior());
        const auto v_d = v.subspan(static_cast<std::size_t>(dom.exterior_offset), n2);
        std::vector<double> q(n1);
        prolong_interior(d, v_d, q);
        for (std::size_t k = 0; k < n1; ++k) {
            x[dom.nodes[k]] = q[k];
        }
        for (std::size_t k = 0; k < n2; ++k) {
            x[dom.nodes[n1 + k]] = v_d[k];
        }
    });
    return x;
}

void RapIluPrecond::apply(std::span<const double> b, std::span<double> x) const {
    if (b.size() != static_cast<std::size_t>(n_) || x.size() != b.size()) {
        throw DimensionError("RapIluPrecond::apply: length mismatch");
    }
    const auto p = static_cast<int>(domains_.size());
    std::vector<std::vector<double>> x_hat(domains_.size());
    std::vector<double> x_ext(static_cast<std::size_t>(n_exterior_));

    // F-relaxation: x_hat = (L_A U_A)^{-1} b per domain
    detail::for_each_domain(p, threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        auto& xl = x_hat[d];
        xl.resize(dom.nodes.size());
        for (std::size_t k = 0; k < xl.size(); ++k) {
            xl[k] = b[dom.nodes[k]];
        }
        smoother_[d].solve_inplace(xl);
        std::copy(xl.begin() + dom.n_interior, xl.end(), x_ext.begin() + dom.exterior_offset);
    });
    if (n_exterior_ == 0) {
        for (int d = 0; d < p; ++d) {
            const auto& nodes = domains_[d].nodes;
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                x[nodes[k]] = x_hat[d][k];
            }
        }
        return;
    }

    // Restriction: r = R (b - A x_hat)
    std::vector<double> r(static_cast<std::size_t>(n_exterior_));
    detail::for_each_domain(p, threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        const auto n2 = static_cast<std::size_t>(dom.n_exterior());
        std::vector<double> t(dom.nodes.size());
        spmv(dom.A, x_hat[d], t);
        spmv_add(1.0, dom.coupling, x_ext, std::span<double>(t).last(n2));
        for (std::size_t k = 0; k < t.size(); ++k) {
            t[k] = b[dom.nodes[k]] - t[k];
        }
        restrict_local(d, t, std::span<double>(r).subspan(
                                 static_cast<std::size_t>(dom.exterior_offset), n2));
    });

    // C-correction
    const LinearOperator op = [this](std::span<const double> in, std::span<double> out) {
        rap_matvec(in, out);
    };
    const LinearOperator pc = [this](std::span<const double> in, std::span<double> out) {
        coarse_solve(in, out);
    };
    const std::vector<double> v = gmres_fixed_steps(op, pc, r, inner_iters_);

    // Interpolation: x = x_hat + P v
    detail::for_each_domain(p, threads_, [&](int d) {
        const LocalDomain& dom = domains_[d];
        const auto n1 = static_cast<std::size_t>(dom.n_interior);
        const auto n2 = static_cast<std::size_t>(dom.n_exterior());
        const auto v_d = std::span<const double>(v).subspan(
            static_cast<std::size_t>(dom.exterior_offset), n2);
        std::vector<double> q(n1);
        prolong_interior(d, v_d, q);
        const auto& xl = x_hat[d];
        for (std::size_t k = 0; k < n1; ++k) {
            x[dom.nodes[k]] = xl[k] + q[k];
        }
        for (std::size_t k = 0; k < n2; ++k) {
            x[dom.nodes[n1 + k]] = xl[n1 + k] + v_d[k];
        }
    });
}

} // namespace ddilu
