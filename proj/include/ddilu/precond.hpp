/// @file precond.hpp
/// @brief Domain-decomposition ILU preconditioners.
///
/// All three families share the same local ordering of each subdomain:
/// the interior unknowns (RCM-ordered) followed by the exterior unknowns
/// in ascending global index. The exterior unknowns of all domains,
/// concatenated domain by domain, form the reduced ("exterior") vector
/// that the two-level methods iterate on.

#ifndef DDILU_PRECOND_HPP
#define DDILU_PRECOND_HPP

#include "ddilu/csr_matrix.hpp"
#include "ddilu/factor.hpp"
#include "ddilu/krylov.hpp"
#include "ddilu/ordering.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ddilu {

class Preconditioner {
public:
    virtual ~Preconditioner() = default;

    virtual index_t size() const = 0;
    /// z = M^{-1} r, both in the original unknown ordering.
    virtual void apply(std::span<const double> r, std::span<double> z) const = 0;

    std::vector<double> apply(std::span<const double> r) const;
    /// Callable view; the preconditioner must outlive it.
    LinearOperator as_operator() const;
};

/// Subdomain i in local ordering.
struct LocalDomain {
    std::vector<index_t> nodes;  // local position -> original global index
    index_t n_interior = 0;
    CsrMatrix A;                 // A_i = [B_i F_i; E_i C_i]
    /// Off-domain couplings of the exterior rows: local exterior row x
    /// position in the concatenated exterior vector (the E_ij blocks).
    CsrMatrix coupling;
    index_t exterior_offset = 0;

    index_t size() const { return static_cast<index_t>(nodes.size()); }
    index_t n_exterior() const { return size() - n_interior; }
};

std::vector<LocalDomain> build_local_domains(const CsrMatrix& A, const DomainLayout& layout,
                                             int threads = 1);

// ---------------------------------------------------------------------------

class BlockJacobiIlu final : public Preconditioner {
public:
    enum class Variant { plain, l1 };

    struct Options {
        FillRule fill = FillRule::ilu0();
        Variant variant = Variant::plain;
        int threads = 1;
    };

    BlockJacobiIlu(const CsrMatrix& A, const DomainLayout& layout, const Options& options);

    index_t size() const override { return n_; }
    void apply(std::span<const double> r, std::span<double> z) const override;
    using Preconditioner::apply;

    index_t num_domains() const { return static_cast<index_t>(domains_.size()); }
    const LocalDomain& domain(index_t d) const { return domains_[d]; }
    /// The matrix that was factorized for domain d (l1-shifted when requested).
    const CsrMatrix& factored_matrix(index_t d) const {
        return shifted_.empty() ? domains_[d].A : shifted_[d];
    }
    const IluFactors& factors(index_t d) const { return factors_[d]; }

private:
    index_t n_ = 0;
    int threads_ = 1;
    std::vector<LocalDomain> domains_;
    std::vector<CsrMatrix> shifted_;  // l1 variant only
    std::vector<IluFactors> factors_;
};

// ---------------------------------------------------------------------------

/// Additive two-level method: block ILU on the interiors, a few GMRES steps
/// on the block-Jacobi-preconditioned reduced system
///   (I + S_i^{-1} sum_j E_ij) y = S_i^{-1} g'
/// with S_i^{-1} applied through the (2,2) factors L_S, U_S.
class SchurIluPrecond final : public Preconditioner {
public:
    struct Options {
        FillRule fill = FillRule::ilu0();
        int inner_iters = 3;
        double schur_drop_tol = 0.0;
        int threads = 1;
    };

    SchurIluPrecond(const CsrMatrix& A, const DomainLayout& layout, const Options& options);

    index_t size() const override { return n_; }
    void apply(std::span<const double> b, std::span<double> x) const override;
    using Preconditioner::apply;

    index_t n_exterior() const { return n_exterior_; }
    /// out_i = y_i + S_i^{-1} sum_j E_ij y_j
    void schur_matvec(std::span<const double> y, std::span<double> out) const;
    /// out_i = S_tilde_i y_i + sum_j E_ij y_j  (the unpreconditioned reduced operator)
    void reduced_matvec(std::span<const double> y, std::span<double> out) const;

    index_t num_domains() const { return static_cast<index_t>(domains_.size()); }
    const LocalDomain& domain(index_t d) const { return domains_[d]; }
    const PartialIluFactors& factors(index_t d) const { return factors_[d]; }

private:
    index_t n_ = 0;
    index_t n_exterior_ = 0;
    int inner_iters_ = 3;
    int threads_ = 1;
    std::vector<LocalDomain> domains_;
    std::vector<PartialIluFactors> factors_;
};

// ---------------------------------------------------------------------------

/// Vector whose range membership the modified factorization enforces:
/// (y; z) in Ran(P) when w = B y + F z. y and w follow the layout's interior
/// order, z the exterior order. Empty members select y = 1, z = 1, w = 0.
struct MiluVectors {
    std::vector<double> y;
    std::vector<double> z;
    std::vector<double> w;

    /// Fills w = B y + F z from A.
    static MiluVectors consistent(const CsrMatrix& A, const DomainLayout& layout,
                                  std::vector<double> y, std::vector<double> z);
};

/// Multiplicative two-level method: ILU(0) smoothing of every A_i, then a
/// coarse correction on RAP with R = (-W L_B^{-1}, I), P = (-U_B^{-1} Z; I)
/// taken from a second factorization (MILU(0) for RAP-MILU) of A_i. P, R and
/// RAP are applied, never formed.
class RapIluPrecond final : public Preconditioner {
public:
    struct Options {
        bool modified = true;  // MILU(0) for P, R and the coarse factors
        MiluVectors milu;
        /// Also compensate the off-domain couplings of the exterior rows
        /// (target includes -E_ij z), so the residual of the block-diagonal
        /// factorization of the whole A annihilates (y; z).
        bool compensate_coupling = false;
        int inner_iters = 3;
        int threads = 1;
    };

    RapIluPrecond(const CsrMatrix& A, const DomainLayout& layout, const Options& options);

    index_t size() const override { return n_; }
    void apply(std::span<const double> b, std::span<double> x) const override;
    using Preconditioner::apply;

    index_t n_exterior() const { return n_exterior_; }
    /// out = R A P v
    void rap_matvec(std::span<const double> v, std::span<double> out) const;
    /// out = (L_S U_S)^{-1} v, domain by domain
    void coarse_solve(std::span<const double> v, std::span<double> out) const;
    /// out = (L_S U_S) v, domain by domain
    void coarse_factor_matvec(std::span<const double> v, std::span<double> out) const;
    /// P v as a global vector in the original ordering.
    std::vector<double> interpolate(std::span<const double> v) const;

    index_t num_domains() const { return static_cast<index_t>(domains_.size()); }
    const LocalDomain& domain(index_t d) const { return domains_[d]; }
    const IluFactors& smoother(index_t d) const { return smoother_[d]; }
    const PartialIluFactors& coarse_factors(index_t d) const { return coarse_[d]; }

private:
    /// q = -U_B^{-1} (Z v_d)
    void prolong_interior(index_t d, std::span<const double> v_d, std::span<double> q) const;
    /// t_ext - W L_B^{-1} t_int for the local vector t (t is overwritten)
    void restrict_local(index_t d, std::span<double> t, std::span<double> out) const;

    index_t n_ = 0;
    index_t n_exterior_ = 0;
    int inner_iters_ = 3;
    int threads_ = 1;
    std::vector<LocalDomain> domains_;
    std::vector<IluFactors> smoother_;
    std::vector<PartialIluFactors> coarse_;
};

// ---------------------------------------------------------------------------

enum class PrecondKind { none, bj, l1bj, schur, rap, rap_milu };

std::string to_string(PrecondKind kind);
PrecondKind parse_precond_kind(const std::string& text);

struct PrecondOptions {
    FillRule fill = FillRule::ilu0();
    int inner_iters = 3;
    int threads = 1;
};

/// Returns nullptr for PrecondKind::none.
std::unique_ptr<Preconditioner> make_preconditioner(PrecondKind kind, const CsrMatrix& A,
                                                    const DomainLayout& layout,
                                                    const PrecondOptions& options);

} // namespace ddilu

#endif // DDILU_PRECOND_HPP
