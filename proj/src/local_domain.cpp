#include "ddilu/precond.hpp"
#include "ddilu/sparse_ops.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace ddilu {

std::vector<double> Preconditioner::apply(std::span<const double> r) const {
    std::vector<double> z(r.size());
    apply(r, z);
    return z;
}

LinearOperator Preconditioner::as_operator() const {
    return [this](std::span<const double> in, std::span<double> out) { apply(in, out); };
}

std::vector<LocalDomain> build_local_domains(const CsrMatrix& A, const DomainLayout& layout,
                                             int threads) {
    if (!A.is_square() || A.n_rows() != layout.n) {
        throw DimensionError("build_local_domains: layout does not match matrix");
    }
    const index_t p = layout.p;
    std::vector<LocalDomain> domains(static_cast<std::size_t>(p));
    std::vector<index_t> local_pos(static_cast<std::size_t>(layout.n), -1);
    const auto perm = layout.global_perm.forward();

    detail::for_each_domain(p, threads, [&](int d) {
        const auto& interior = layout.interior_of[d];
        const auto& exterior = layout.exterior_of[d];
        LocalDomain& dom = domains[d];
        dom.n_interior = static_cast<index_t>(interior.size());
        dom.exterior_offset = layout.exterior_offset(d);

        const Permutation order = rcm(extract_block(A, interior, interior));
        dom.nodes.reserve(interior.size() + exterior.size());
        for (index_t k = 0; k < dom.n_interior; ++k) {
            dom.nodes.push_back(interior[order.inverse()[k]]);
        }
        dom.nodes.insert(dom.nodes.end(), exterior.begin(), exterior.end());
        for (index_t k = 0; k < dom.size(); ++k) {
            local_pos[dom.nodes[k]] = k;
        }

        std::vector<index_t> sorted = dom.nodes;
        std::sort(sorted.begin(), sorted.end());
        std::vector<index_t> to_local(sorted.size());
        for (std::size_t k = 0; k < sorted.size(); ++k) {
            to_local[k] = local_pos[sorted[k]];
        }
        dom.A = permute_symmetric(extract_block(A, sorted, sorted),
                                  Permutation::from_forward(std::move(to_local)));

        std::vector<index_t> row_ptr{0};
        std::vector<index_t> col_idx;
        std::vector<double> values;
        std::vector<std::pair<index_t, double>> buf;
        for (index_t node : exterior) {
            const auto row = A.row(node);
            buf.clear();
            for (std::size_t t = 0; t < row.size(); ++t) {
                const index_t c = row.cols[t];
                if (layout.owner[c] != d) {
                    buf.emplace_back(perm[c] - layout.n_interior, row.vals[t]);
                }
            }
            std::sort(buf.begin(), buf.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (const auto& [c, v] : buf) {
                col_idx.push_back(c);
                values.push_back(v);
            }
            row_ptr.push_back(static_cast<index_t>(col_idx.size()));
        }
        dom.coupling = CsrMatrix(static_cast<index_t>(exterior.size()), layout.n_exterior,
                                 std::move(row_ptr), std::move(col_idx), std::move(values));
    });
    return domains;
}

std::string to_string(PrecondKind kind) {
    switch (kind) {
    case PrecondKind::none:
        return "none";
    case PrecondKind::bj:
        return "bj";
    case PrecondKind::l1bj:
        return "l1bj";
    case PrecondKind::schur:
        return "schur";
    case PrecondKind::rap:
        return "rap";
    case PrecondKind::rap_milu:
        return "rap-milu";
    }
    return "unknown";
}

PrecondKind parse_precond_kind(const std::string& text) {
    for (auto k : {PrecondKind::none, PrecondKind::bj, PrecondKind::l1bj, PrecondKind::schur,
                   PrecondKind::rap, PrecondKind::rap_milu}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw std::invalid_argument("unknown preconditioner '" + text + "'");
}

std::unique_ptr<Preconditioner> make_preconditioner(PrecondKind kind, const CsrMatrix& A,
                                                    const DomainLayout& layout,
                                                    const PrecondOptions& options) {
    switch (kind) {
    case PrecondKind::none:
        return nullptr;
    case PrecondKind::bj:
    case PrecondKind::l1bj:
        return std::make_unique<BlockJacobiIlu>(
            A, layout,
            BlockJacobiIlu::Options{options.fill,
                                    kind == PrecondKind::l1bj ? BlockJacobiIlu::Variant::l1
                                                              : BlockJacobiIlu::Variant::plain,
                                    options.threads});
    case PrecondKind::schur:
        return std::make_unique<SchurIluPrecond>(
            A, layout,
            SchurIluPrecond::Options{options.fill, options.inner_iters, 0.0, options.threads});
    case PrecondKind::rap:
    case PrecondKind::rap_milu: {
        RapIluPrecond::Options o;
        o.modified = kind == PrecondKind::rap_milu;
        o.inner_iters = options.inner_iters;
        o.threads = options.threads;
        if (options.fill.kind != FactorKind::ilu0) {
            throw std::invalid_argument("rap preconditioners support only the ilu0 fill rule");
        }
        return std::make_unique<RapIluPrecond>(A, layout, o);
    }
    }
    throw std::invalid_argument("make_preconditioner: unknown kind");
}

} // namespace ddilu
