// constraint.hpp — materialization of the real-linear constraint map
// K: (u_1, ..., u_N) -> algebra_projection(sum_i [L_i, u_i]) over isometric
// real coordinates, with its adjoint, pseudoinverse, rank, and a certified
// operator-norm estimate. Built once per (triple, domain restriction) and
// reused by every certification step.

#pragma once

#include <vector>

#include "specdist/operator_core.hpp"
#include "specdist/triple.hpp"

namespace specdist {

class ConstraintOperator {
  public:
    /// Coordinate dimensions of the materialized map. Domain: 2*N*n^2 reals
    /// for unrestricted complex blocks, N*n^2 for anti-Hermitian blocks.
    /// Range: 2*n^2 reals in Full mode, 2*n in Diagonal mode.
    Index domain_dim() const noexcept { return matrix_.cols(); }
    Index range_dim() const noexcept { return matrix_.rows(); }

    const RealMatrix& matrix() const noexcept { return matrix_; }
    RealMatrix adjoint_matrix() const { return matrix_.transpose(); }

    /// Numerical rank at cutoff 1e-12 relative to the top singular value.
    Index rank() const noexcept { return rank_; }

    /// Power-iteration estimate of ||K||, inflated by a 0.5% safety factor so
    /// step sizes based on it remain convergent.
    double norm_bound() const noexcept { return norm_bound_; }

    bool antihermitian() const noexcept { return antihermitian_; }
    Algebra algebra() const noexcept { return algebra_; }
    Index dim() const noexcept { return n_; }
    Index block_count() const noexcept { return block_count_; }

    /// Isometric coordinates (Re Tr(x† y) = Euclidean dot product).
    /// encode_domain orthogonally projects onto the anti-Hermitian subspace
    /// when the domain is restricted.
    RealVector encode_domain(const OneForm& u) const;
    OneForm decode_domain(const RealVector& coords) const;
    RealVector encode_range(const ComplexMatrix& m) const;
    ComplexMatrix decode_range(const RealVector& coords) const;

    /// K and its adjoint through the coordinate maps.
    ComplexMatrix apply(const OneForm& u) const;
    OneForm apply_adjoint(const ComplexMatrix& a) const;

    /// Minimum-norm least-squares solve K(u) = m via the cached SVD.
    RealVector apply_pinv(const RealVector& range_coords) const;

  private:
    friend ConstraintOperator build_constraint_operator(const SpectralTripleSpec& t,
                                                        bool restrict_antihermitian);
    ConstraintOperator() = default;

    RealMatrix matrix_;      // range_dim x domain_dim
    RealMatrix pinv_u_;      // rank columns of U
    RealMatrix pinv_v_;      // rank columns of V
    RealVector pinv_sigma_;  // leading rank singular values
    Index rank_ = 0;
    double norm_bound_ = 0.0;
    bool antihermitian_ = false;
    Algebra algebra_ = Algebra::Full;
    Index n_ = 0;
    Index block_count_ = 0;
};

/// Materializes K for the triple over the chosen domain, factorizes it
/// (rank-revealing SVD for the pseudoinverse), and estimates ||K|| by power
/// iteration from a deterministic start vector.
ConstraintOperator build_constraint_operator(const SpectralTripleSpec& t,
                                             bool restrict_antihermitian);

} // namespace specdist
