// triple.hpp — finite spectral triples, states, one-forms, and the derivation
// a -> ([L_i, a]) with its kernel/connectedness analysis.

#pragma once

#include <vector>

#include "specdist/operator_core.hpp"

namespace specdist {

// --------------------------------- algebra ---------------------------------

/// Which subalgebra of M_n(C) is represented: all of it, or the diagonal
/// (commutative) subalgebra C^n.
enum class Algebra { Full, Diagonal };

// ---------------------------------- types ----------------------------------

/// Finite spectral triple with A = M_n(C) (or its diagonal subalgebra),
/// H = C^n ⊗ C^N and D = sum_i L_i ⊗ E_ii. D is never materialized; every
/// operation works blockwise on the L_i.
class SpectralTripleSpec {
  public:
    SpectralTripleSpec(std::vector<HermitianMatrix> dirac_blocks, Algebra algebra);

    Index dim() const noexcept { return n_; }                      // n
    Index block_count() const noexcept { return static_cast<Index>(blocks_.size()); } // N
    const HermitianMatrix& block(Index i) const { return blocks_.at(static_cast<size_t>(i)); }
    const std::vector<HermitianMatrix>& blocks() const noexcept { return blocks_; }
    Algebra algebra() const noexcept { return algebra_; }

    /// max_i ||L_i||_op, the scale used for relative nullspace cutoffs.
    double block_norm_scale() const;

  private:
    std::vector<HermitianMatrix> blocks_;
    Algebra algebra_;
    Index n_ = 0;
};

/// Positive semidefinite, trace-one matrix representing the state
/// a -> Tr(rho a). Construction symmetrizes, then rejects trace deviations
/// beyond 1e-10 or eigenvalues below -1e-10.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(ComplexMatrix rho);

    const ComplexMatrix& matrix() const noexcept { return rho_; }
    Index dim() const noexcept { return rho_.rows(); }

  private:
    ComplexMatrix rho_;
};

/// N-tuple of n x n blocks (u_1, ..., u_N); the dual variable of the
/// nuclear-norm problem.
struct OneForm {
    std::vector<ComplexMatrix> blocks;

    static OneForm zero(const SpectralTripleSpec& t);
    Index block_count() const noexcept { return static_cast<Index>(blocks.size()); }
};

/// Frobenius-orthonormal basis of the Hermitian kernel of the derivation
/// within the represented algebra, {a : [L_i, a] = 0 for all i}.
struct KernelBasis {
    std::vector<HermitianMatrix> elements;
    Index dimension() const noexcept { return static_cast<Index>(elements.size()); }
};

// ------------------------------- validation --------------------------------

/// Throws ShapeError/ModeError unless m is a valid algebra element for t
/// (n x n; diagonal when the algebra is Diagonal).
void require_algebra_element(const SpectralTripleSpec& t, const ComplexMatrix& m, const char* what);

/// Throws unless u has N blocks of size n x n. When antihermitian is set,
/// additionally requires u_i† = -u_i within 1e-12 entrywise.
void require_one_form(const SpectralTripleSpec& t, const OneForm& u, bool antihermitian = false);

/// Throws unless rho is a state of the represented algebra (dimension n,
/// diagonal in Diagonal mode).
void require_state(const SpectralTripleSpec& t, const DensityMatrix& rho);

// ------------------------------- operations --------------------------------

/// The derivation: nabla(a) = ([L_1, a], ..., [L_N, a]).
OneForm nabla(const SpectralTripleSpec& t, const HermitianMatrix& a);

/// General-matrix extension of the derivation (same formula, a need not be
/// Hermitian). Subject to the same algebra-mode check.
OneForm nabla(const SpectralTripleSpec& t, const ComplexMatrix& a);

/// Lipschitz seminorm L(a) = ||[D, a]|| = max_i ||[L_i, a]||_op.
double lipschitz_seminorm(const SpectralTripleSpec& t, const HermitianMatrix& a);
double lipschitz_seminorm(const SpectralTripleSpec& t, const ComplexMatrix& a);

/// Divergence-type adjoint K(u) = sum_i [L_i, u_i], composed with
/// algebra_projection in Diagonal mode (the constraint only tests against
/// algebra elements).
ComplexMatrix divergence(const SpectralTripleSpec& t, const OneForm& u);

/// Orthogonal projection, under Re Tr(x† y), onto the represented algebra:
/// identity in Full mode, diagonal extraction in Diagonal mode.
ComplexMatrix algebra_projection(const SpectralTripleSpec& t, const ComplexMatrix& m);

/// Frobenius-orthonormal basis (under Re Tr(x† y)) of the Hermitian part of
/// the represented algebra: n real-diagonal units in Diagonal mode, n^2
/// Hermitian units in Full mode.
std::vector<ComplexMatrix> hermitian_algebra_basis(const SpectralTripleSpec& t);

/// Numerical nullspace of the stacked map a -> ([L_i, a]) over the Hermitian
/// part of the algebra, cut off at singular values <= 1e-9 * max_i ||L_i||_op.
KernelBasis kernel_basis(const SpectralTripleSpec& t);

/// True iff the kernel is spanned by the identity alone.
bool is_connected(const SpectralTripleSpec& t);

/// Verdict of the finite-distance gate for a state pair.
struct FiniteDistanceReport {
    bool finite = true;
    double worst_violation = 0.0;     // max_k |Tr((rho1 - rho2) k)|
    Index worst_index = -1;           // kernel element achieving it (-1 if none)
};

FiniteDistanceReport finite_distance_report(const SpectralTripleSpec& t, const KernelBasis& kb,
                                            const DensityMatrix& rho1, const DensityMatrix& rho2);

/// True iff |Tr((rho1 - rho2) k)| <= 1e-9 for every kernel basis element k;
/// false signals an infinite distance.
bool check_finite_distance(const SpectralTripleSpec& t, const DensityMatrix& rho1,
                           const DensityMatrix& rho2);

} // namespace specdist
