// operator_core.hpp — dense complex-matrix kernel: decompositions, norms,
// commutators and the proximal/projection operators used by the solver.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>
#include <utility>

#include "specdist/errors.hpp"

namespace specdist {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// ------------------------------- validation --------------------------------

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (!m.allFinite()) throw NumericError(std::string(what) + ": non-finite entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << ": expected square matrix, got " << m.rows() << "x" << m.cols();
        throw ShapeError(os.str());
    }
}

// ------------------------------- commutator --------------------------------

/// [a, b] = ab - ba for square matrices of equal dimension.
template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
    -> Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
    require_square(a, "commutator");
    require_square(b, "commutator");
    if (a.rows() != b.rows()) {
        std::ostringstream os;
        os << "commutator: dimension mismatch " << a.rows() << " vs " << b.rows();
        throw ShapeError(os.str());
    }
    return a * b - b * a;
}

// ----------------------------- HermitianMatrix -----------------------------

enum class Symmetrize { Tolerant, Strict };

/// Hermitian n x n matrix. Construction symmetrizes the input to (M + M†)/2,
/// so the invariant M = M† holds exactly afterwards. Strict mode rejects
/// inputs whose Hermitian defect exceeds 1e-12 entrywise.
class HermitianMatrix {
  public:
    HermitianMatrix() = default;

    explicit HermitianMatrix(ComplexMatrix m, Symmetrize mode = Symmetrize::Tolerant) {
        require_square(m, "HermitianMatrix");
        require_finite(m, "HermitianMatrix");
        if (mode == Symmetrize::Strict) {
            const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
            if (defect > 1e-12) {
                std::ostringstream os;
                os << "HermitianMatrix: input is not Hermitian (entrywise defect "
                   << defect << " > 1e-12)";
                throw ShapeError(os.str());
            }
        }
        m_ = 0.5 * (m + m.adjoint().eval());
    }

    static HermitianMatrix Identity(Index n) { return HermitianMatrix(ComplexMatrix::Identity(n, n)); }
    static HermitianMatrix Zero(Index n) { return HermitianMatrix(ComplexMatrix::Zero(n, n)); }

    const ComplexMatrix& matrix() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }
    bool empty() const noexcept { return m_.size() == 0; }

  private:
    ComplexMatrix m_;
};

// ----------------------------- decompositions ------------------------------

struct HermitianEig {
    RealVector values;     // ascending
    ComplexMatrix vectors; // unitary, h = V diag(values) V†
};

/// Spectral decomposition of a Hermitian matrix; eigenvalues ascending.
inline HermitianEig hermitian_eig(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
    if (es.info() != Eigen::Success)
        throw NumericError("hermitian_eig: eigensolver did not converge within its iteration cap");
    return {es.eigenvalues(), es.eigenvectors()};
}

template <typename Scalar>
struct SvdResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u;
    RealVector singular_values; // descending, >= 0
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v;
};

/// Full SVD, m = U diag(s) V† with s descending and U, V unitary.
template <typename Derived>
SvdResult<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& m) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    require_finite(m, "svd");
    Eigen::JacobiSVD<Mat> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (!dec.singularValues().allFinite())
        throw NumericError("svd: decomposition produced non-finite singular values");
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

// --------------------------------- norms -----------------------------------

/// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) return 0.0;
    require_finite(m, "operator_norm");
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::JacobiSVD<Mat> dec(m);
    return dec.singularValues().size() > 0 ? dec.singularValues()(0) : 0.0;
}

/// Sum of singular values, Tr sqrt(m† m).
template <typename Derived>
double nuclear_norm(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) return 0.0;
    require_finite(m, "nuclear_norm");
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::JacobiSVD<Mat> dec(m);
    return dec.singularValues().sum();
}

// ----------------------------- prox / projection ----------------------------

/// Proximal operator of tau * nuclear norm: U diag(max(s_i - tau, 0)) V†.
/// Repeated singular values are shrunk identically.
template <typename Derived>
auto singular_value_soft_threshold(const Eigen::MatrixBase<Derived>& m, double tau)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
    if (tau < 0.0 || !std::isfinite(tau))
        throw std::invalid_argument("singular_value_soft_threshold: tau must be >= 0");
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (tau == 0.0) return m;
    require_finite(m, "singular_value_soft_threshold");
    Eigen::JacobiSVD<Mat> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RealVector s = (dec.singularValues().array() - tau).max(0.0);
    return dec.matrixU() * s.asDiagonal() * dec.matrixV().adjoint();
}

/// Euclidean (Frobenius) projection onto the operator-norm ball of radius r:
/// U diag(min(s_i, r)) V†.
template <typename Derived>
auto clip_to_operator_ball(const Eigen::MatrixBase<Derived>& m, double r)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
    if (r <= 0.0 || !std::isfinite(r))
        throw std::invalid_argument("clip_to_operator_ball: radius must be > 0");
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    require_finite(m, "clip_to_operator_ball");
    Eigen::JacobiSVD<Mat> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.singularValues().size() == 0 || dec.singularValues()(0) <= r) return m;
    RealVector s = dec.singularValues().cwiseMin(r);
    return dec.matrixU() * s.asDiagonal() * dec.matrixV().adjoint();
}

// ------------------------------- small helpers ------------------------------

/// Re Tr(x† y), the real inner product under which all adjoints are taken.
inline double real_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    return (x.conjugate().cwiseProduct(y)).sum().real();
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint().eval());
}

inline ComplexMatrix antihermitian_part(const ComplexMatrix& m) {
    return 0.5 * (m - m.adjoint().eval());
}

} // namespace specdist
