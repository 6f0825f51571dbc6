// triple.cpp — spectral-triple data model and the derivation analysis.

#include "specdist/triple.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "specdist/errors.hpp"

namespace specdist {

namespace {

constexpr double kDiagonalTol = 1e-12;  // off-diagonal mass allowed in Diagonal mode
constexpr double kHermitianTol = 1e-12; // entrywise anti-Hermitian defect allowed
constexpr double kTraceTol = 1e-10;     // |Tr(rho) - 1| allowed
constexpr double kPsdTol = 1e-10;       // eigenvalue floor: lambda_min >= -kPsdTol
constexpr double kKernelRelCut = 1e-9;  // nullspace cut, relative to max_i ||L_i||_op
constexpr double kGateTol = 1e-9;       // finite-distance pairing tolerance

double max_offdiagonal(const ComplexMatrix& m) {
    double worst = 0.0;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

} // namespace

std::vector<ComplexMatrix> hermitian_algebra_basis(const SpectralTripleSpec& t) {
    const Index n = t.dim();
    std::vector<ComplexMatrix> basis;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Index k = 0; k < n; ++k) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(k, k) = 1.0;
        basis.push_back(std::move(e));
    }
    if (t.algebra() == Algebra::Full) {
        for (Index j = 0; j < n; ++j) {
            for (Index k = j + 1; k < n; ++k) {
                ComplexMatrix s = ComplexMatrix::Zero(n, n);
                s(j, k) = inv_sqrt2;
                s(k, j) = inv_sqrt2;
                basis.push_back(std::move(s));
                ComplexMatrix a = ComplexMatrix::Zero(n, n);
                a(j, k) = Complex(0.0, inv_sqrt2);
                a(k, j) = Complex(0.0, -inv_sqrt2);
                basis.push_back(std::move(a));
            }
        }
    }
    return basis;
}

// ---------------------------- SpectralTripleSpec ----------------------------

SpectralTripleSpec::SpectralTripleSpec(std::vector<HermitianMatrix> dirac_blocks, Algebra algebra)
    : blocks_(std::move(dirac_blocks)), algebra_(algebra) {
    if (blocks_.empty()) throw ShapeError("spectral triple needs at least one Dirac block");
    n_ = blocks_.front().dim();
    if (n_ < 1) throw ShapeError("Dirac blocks must be nonempty");
    for (const auto& b : blocks_)
        if (b.dim() != n_)
            throw ShapeError("Dirac blocks disagree in size: " + std::to_string(b.dim()) +
                             " vs " + std::to_string(n_));
}

double SpectralTripleSpec::block_norm_scale() const {
    double scale = 0.0;
    for (const auto& b : blocks_) scale = std::max(scale, operator_norm(b.matrix()));
    return scale;
}

// ------------------------------- DensityMatrix ------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix rho) {
    HermitianMatrix h(std::move(rho)); // symmetrize (m + m†)/2
    const double trace = h.matrix().trace().real();
    if (std::abs(trace - 1.0) > kTraceTol)
        throw ShapeError("density matrix trace deviates from one by " +
                         std::to_string(std::abs(trace - 1.0)));
    const HermitianEig eig = hermitian_eig(h);
    if (eig.values.size() > 0 && eig.values.minCoeff() < -kPsdTol)
        throw ShapeError("density matrix has negative eigenvalue " +
                         std::to_string(eig.values.minCoeff()));
    rho_ = h.matrix();
}

// ---------------------------------- OneForm ---------------------------------

OneForm OneForm::zero(const SpectralTripleSpec& t) {
    OneForm u;
    u.blocks.assign(static_cast<size_t>(t.block_count()), ComplexMatrix::Zero(t.dim(), t.dim()));
    return u;
}

// -------------------------------- validation --------------------------------

void require_algebra_element(const SpectralTripleSpec& t, const ComplexMatrix& m, const char* what) {
    if (m.rows() != t.dim() || m.cols() != t.dim())
        throw ShapeError(std::string(what) + ": expected " + std::to_string(t.dim()) + "x" +
                         std::to_string(t.dim()) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
    require_finite(m, what);
    if (t.algebra() == Algebra::Diagonal && max_offdiagonal(m) > kDiagonalTol)
        throw ModeError(std::string(what) +
                        ": algebra element must be diagonal in Diagonal mode");
}

void require_one_form(const SpectralTripleSpec& t, const OneForm& u, bool antihermitian) {
    if (u.block_count() != t.block_count())
        throw ShapeError("one-form has " + std::to_string(u.block_count()) + " blocks, triple has " +
                         std::to_string(t.block_count()));
    for (const auto& b : u.blocks) {
        if (b.rows() != t.dim() || b.cols() != t.dim())
            throw ShapeError("one-form block is " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()) + ", expected " + std::to_string(t.dim()) +
                             "x" + std::to_string(t.dim()));
        require_finite(b, "one-form block");
        if (antihermitian) {
            const double defect = (b + b.adjoint()).cwiseAbs().maxCoeff();
            if (defect > kHermitianTol)
                throw ModeError("one-form block is not anti-Hermitian (defect " +
                                std::to_string(defect) + ")");
        }
    }
}

void require_state(const SpectralTripleSpec& t, const DensityMatrix& rho) {
    require_algebra_element(t, rho.matrix(), "state");
}

// -------------------------------- operations --------------------------------

OneForm nabla(const SpectralTripleSpec& t, const ComplexMatrix& a) {
    require_algebra_element(t, a, "nabla argument");
    OneForm out;
    out.blocks.reserve(static_cast<size_t>(t.block_count()));
    for (const auto& l : t.blocks()) out.blocks.push_back(commutator(l.matrix(), a));
    return out;
}

OneForm nabla(const SpectralTripleSpec& t, const HermitianMatrix& a) {
    return nabla(t, a.matrix());
}

double lipschitz_seminorm(const SpectralTripleSpec& t, const ComplexMatrix& a) {
    const OneForm grad = nabla(t, a);
    double worst = 0.0;
    for (const auto& b : grad.blocks) worst = std::max(worst, operator_norm(b));
    return worst;
}

double lipschitz_seminorm(const SpectralTripleSpec& t, const HermitianMatrix& a) {
    return lipschitz_seminorm(t, a.matrix());
}

ComplexMatrix algebra_projection(const SpectralTripleSpec& t, const ComplexMatrix& m) {
    if (m.rows() != t.dim() || m.cols() != t.dim())
        throw ShapeError("algebra_projection: expected " + std::to_string(t.dim()) + "x" +
                         std::to_string(t.dim()) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
    if (t.algebra() == Algebra::Full) return m;
    return m.diagonal().asDiagonal();
}

ComplexMatrix divergence(const SpectralTripleSpec& t, const OneForm& u) {
    require_one_form(t, u);
    ComplexMatrix sum = ComplexMatrix::Zero(t.dim(), t.dim());
    for (Index i = 0; i < t.block_count(); ++i)
        sum += commutator(t.block(i).matrix(), u.blocks[static_cast<size_t>(i)]);
    return algebra_projection(t, sum);
}

KernelBasis kernel_basis(const SpectralTripleSpec& t) {
    const Index n = t.dim();
    const Index nblk = t.block_count();
    const std::vector<ComplexMatrix> basis = hermitian_algebra_basis(t);
    const Index d = static_cast<Index>(basis.size());

    // Column j stacks the real and imaginary parts of every entry of
    // ([L_i, b_j])_i; the nullspace of this real matrix is the kernel of the
    // derivation over the Hermitian algebra part.
    RealMatrix map(2 * nblk * n * n, d);
    for (Index j = 0; j < d; ++j) {
        Index row = 0;
        for (Index i = 0; i < nblk; ++i) {
            const ComplexMatrix c = commutator(t.block(i).matrix(), basis[static_cast<size_t>(j)]);
            for (Index col = 0; col < n; ++col) {
                for (Index r = 0; r < n; ++r) {
                    map(row++, j) = c(r, col).real();
                    map(row++, j) = c(r, col).imag();
                }
            }
        }
    }

    Eigen::JacobiSVD<RealMatrix> dec(map, Eigen::ComputeFullV);
    const double cutoff = kKernelRelCut * t.block_norm_scale();
    const auto& sv = dec.singularValues();

    KernelBasis kb;
    for (Index j = 0; j < d; ++j) {
        const double sigma = j < sv.size() ? sv(j) : 0.0;
        if (sigma > cutoff) continue;
        ComplexMatrix a = ComplexMatrix::Zero(n, n);
        for (Index k = 0; k < d; ++k) a += dec.matrixV()(k, j) * basis[static_cast<size_t>(k)];
        kb.elements.emplace_back(std::move(a));
    }
    return kb;
}

bool is_connected(const SpectralTripleSpec& t) {
    return kernel_basis(t).dimension() == 1;
}

FiniteDistanceReport finite_distance_report(const SpectralTripleSpec& t, const KernelBasis& kb,
                                            const DensityMatrix& rho1, const DensityMatrix& rho2) {
    require_state(t, rho1);
    require_state(t, rho2);
    const ComplexMatrix delta = rho1.matrix() - rho2.matrix();
    FiniteDistanceReport report;
    for (Index j = 0; j < kb.dimension(); ++j) {
        const double pairing =
            std::abs(real_inner(kb.elements[static_cast<size_t>(j)].matrix(), delta));
        if (pairing > report.worst_violation) {
            report.worst_violation = pairing;
            report.worst_index = j;
        }
    }
    report.finite = report.worst_violation <= kGateTol;
    return report;
}

bool check_finite_distance(const SpectralTripleSpec& t, const DensityMatrix& rho1,
                           const DensityMatrix& rho2) {
    return finite_distance_report(t, kernel_basis(t), rho1, rho2).finite;
}

} // namespace specdist
