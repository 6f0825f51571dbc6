// solver.cpp — primal-dual iteration with certification decoupled from the
// iterates: every reported bound passes through round_primal / round_dual.

#include "specdist/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "specdist/errors.hpp"

namespace specdist {

namespace {

constexpr double kZeroDistanceTol = 1e-12;   // Frobenius coincidence shortcut
constexpr double kDualResidualTol = 1e-9;    // feasibility demanded of rounded flows
constexpr double kUnboundedSeminorm = 1e-14; // seminorm below which a direction
constexpr double kUnboundedPairing = 1e-12;  // with this much pairing is unbounded
constexpr double kStepBudget = 0.95;         // tau * sigma * ||K||^2

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.tol_gap > 0.0) || !std::isfinite(cfg.tol_gap))
        throw std::invalid_argument("tol_gap must be positive and finite");
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (cfg.check_every < 1) throw std::invalid_argument("check_every must be at least 1");
    if (!(cfg.step_ratio > 0.0) || !std::isfinite(cfg.step_ratio))
        throw std::invalid_argument("step_ratio must be positive and finite");
}

/// sum_i [L_i, u_i] projected onto the algebra; validation-free hot-loop twin
/// of divergence().
ComplexMatrix apply_constraint(const SpectralTripleSpec& t, const OneForm& u) {
    ComplexMatrix sum = ComplexMatrix::Zero(t.dim(), t.dim());
    for (Index i = 0; i < t.block_count(); ++i) {
        const ComplexMatrix& l = t.block(i).matrix();
        const ComplexMatrix& b = u.blocks[static_cast<size_t>(i)];
        sum.noalias() += l * b;
        sum.noalias() -= b * l;
    }
    return algebra_projection(t, sum);
}

/// Singular-value soft threshold specialized to (numerically) anti-Hermitian
/// blocks: m = i h with h Hermitian has singular values |eig(h)|, so the
/// shrinkage is a Hermitian eigenproblem and the result stays anti-Hermitian.
/// Any input too far from anti-Hermitian falls back to the general SVD path.
ComplexMatrix svt_block(const ComplexMatrix& m, double tau) {
    const double scale = m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
    const double defect = m.size() > 0 ? (m + m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    if (defect > 1e-10 * std::max(scale, 1.0)) return singular_value_soft_threshold(m, tau);
    const ComplexMatrix h = (m - m.adjoint()) * Complex(0.0, -0.5);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    if (eig.info() != Eigen::Success) return singular_value_soft_threshold(m, tau);
    RealVector lam = eig.eigenvalues();
    for (Index k = 0; k < lam.size(); ++k) {
        const double mag = std::max(std::abs(lam(k)) - tau, 0.0);
        lam(k) = lam(k) >= 0.0 ? mag : -mag;
    }
    return Complex(0.0, 1.0) *
           (eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint());
}

DistanceCertificate infinite_certificate() {
    DistanceCertificate cert;
    cert.status = SolveStatus::Infinite;
    cert.lower = std::numeric_limits<double>::infinity();
    cert.upper = std::numeric_limits<double>::infinity();
    cert.gap = std::numeric_limits<double>::infinity();
    return cert;
}

} // namespace

const char* to_string(SolveStatus status) noexcept {
    switch (status) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIter: return "MaxIter";
        case SolveStatus::Infinite: return "Infinite";
        case SolveStatus::ZeroDistance: return "ZeroDistance";
    }
    return "Unknown";
}

// -------------------------------- rounding ----------------------------------

std::pair<double, HermitianMatrix> round_primal(const SpectralTripleSpec& t,
                                                const HermitianMatrix& a,
                                                const ComplexMatrix& delta_rho) {
    const double s = lipschitz_seminorm(t, a);
    const double raw_pairing = real_inner(delta_rho, a.matrix());
    if (s <= kUnboundedSeminorm && raw_pairing > kUnboundedPairing)
        throw InfeasibleError(
            "unbounded ascent direction: a seminorm-null element pairs with the state "
            "difference, so the distance is infinite");
    HermitianMatrix feasible(a.matrix() / std::max(s, 1.0));
    return {real_inner(delta_rho, feasible.matrix()), feasible};
}

std::pair<double, OneForm> round_dual(const ConstraintOperator& op, const OneForm& u,
                                      const ComplexMatrix& delta_rho) {
    const RealVector target = op.encode_range(delta_rho);
    const RealVector coords = op.encode_domain(u);
    const RealVector corrected = coords + op.apply_pinv(target - op.matrix() * coords);
    const double residual = (op.matrix() * corrected - target).norm();
    if (residual > kDualResidualTol) {
        std::ostringstream os;
        os << "flow projection residual " << residual
           << " exceeds 1e-9: the state difference lies outside the constraint range";
        throw InfeasibleError(os.str());
    }
    OneForm feasible = op.decode_domain(corrected);
    double upper = 0.0;
    for (const auto& b : feasible.blocks) upper += nuclear_norm(b);
    return {upper, feasible};
}

// ------------------------------ solve_distance -------------------------------

DistanceCertificate solve_distance(const SpectralTripleSpec& t, const DensityMatrix& rho1,
                                   const DensityMatrix& rho2, const SolverConfig& cfg) {
    validate_config(cfg);
    require_state(t, rho1);
    require_state(t, rho2);

    const KernelBasis kb = kernel_basis(t);
    if (!finite_distance_report(t, kb, rho1, rho2).finite) return infinite_certificate();

    const ComplexMatrix delta = rho1.matrix() - rho2.matrix();
    if (delta.norm() <= kZeroDistanceTol) {
        DistanceCertificate cert;
        cert.status = SolveStatus::ZeroDistance;
        cert.primal_witness = HermitianMatrix::Zero(t.dim());
        cert.dual_witness = OneForm::zero(t);
        return cert;
    }

    const ConstraintOperator op = build_constraint_operator(t, cfg.restrict_antihermitian);
    if (op.norm_bound() <= 0.0) {
        // Every Dirac block is central, so the constraint range is {0}; a
        // nonzero state difference can only have passed the gate inside its
        // tolerance, and the true distance is infinite.
        return infinite_certificate();
    }

    const double tau = std::sqrt(kStepBudget * cfg.step_ratio) / op.norm_bound();
    const double sigma = std::sqrt(kStepBudget / cfg.step_ratio) / op.norm_bound();

    // Deterministic, scale-aware start.
    ComplexMatrix a = delta / std::max(1.0, lipschitz_seminorm(t, HermitianMatrix(delta)));
    OneForm u = OneForm::zero(t);
    OneForm u_bar = u;

    double best_lower = -std::numeric_limits<double>::infinity();
    double best_upper = std::numeric_limits<double>::infinity();
    HermitianMatrix best_a;
    OneForm best_u;

    const auto certify = [&]() {
        a = hermitian_part(a); // shed accumulated floating-point asymmetry
        const auto primal = round_primal(t, HermitianMatrix(a), delta);
        if (primal.first > best_lower) {
            best_lower = primal.first;
            best_a = primal.second;
        }
        const auto dual = round_dual(op, u, delta);
        if (dual.first < best_upper) {
            best_upper = dual.first;
            best_u = dual.second;
        }
        return (best_upper - best_lower) <= cfg.tol_gap * std::max(1.0, best_upper);
    };

    bool converged = certify(); // certify the initial point (iteration 0)
    long iter = 0;
    while (!converged && iter < cfg.max_iter) {
        ++iter;
        a += sigma * (delta - apply_constraint(t, u_bar));
        for (Index i = 0; i < t.block_count(); ++i) {
            const size_t si = static_cast<size_t>(i);
            ComplexMatrix next =
                svt_block(u.blocks[si] + tau * commutator(t.block(i).matrix(), a), tau);
            if (cfg.restrict_antihermitian) next = antihermitian_part(next);
            u_bar.blocks[si] = 2.0 * next - u.blocks[si];
            u.blocks[si] = std::move(next);
        }
        if (iter % cfg.check_every == 0) converged = certify();
    }
    if (!converged) converged = certify(); // final iterate may be off-schedule

    DistanceCertificate cert;
    cert.lower = best_lower;
    cert.upper = best_upper;
    cert.gap = best_upper - best_lower;
    cert.primal_witness = best_a;
    cert.dual_witness = best_u;
    cert.iterations = iter;
    cert.status = converged ? SolveStatus::Converged : SolveStatus::MaxIter;
    return cert;
}

// ---------------------------- solve_primal_ascent ----------------------------

std::pair<double, HermitianMatrix> solve_primal_ascent(const SpectralTripleSpec& t,
                                                       const DensityMatrix& rho1,
                                                       const DensityMatrix& rho2,
                                                       const SolverConfig& cfg) {
    validate_config(cfg);
    require_state(t, rho1);
    require_state(t, rho2);

    if (!finite_distance_report(t, kernel_basis(t), rho1, rho2).finite)
        throw InfeasibleError("finiteness gate fails: the distance is infinite");

    const ComplexMatrix delta = rho1.matrix() - rho2.matrix();
    if (delta.norm() <= kZeroDistanceTol) return {0.0, HermitianMatrix::Zero(t.dim())};

    const Index n = t.dim();
    const std::vector<ComplexMatrix> basis = hermitian_algebra_basis(t);
    const Index d = static_cast<Index>(basis.size());

    const auto encode_block = [n](const ComplexMatrix& m) {
        RealVector v(2 * n * n);
        Index at = 0;
        for (Index c = 0; c < n; ++c) {
            for (Index r = 0; r < n; ++r) {
                v(at++) = m(r, c).real();
                v(at++) = m(r, c).imag();
            }
        }
        return v;
    };

    // Per-block derivation maps over the Hermitian algebra; their least-squares
    // solves give the minimum-norm linearized feasibility corrections.
    std::vector<Eigen::JacobiSVD<RealMatrix>> block_maps;
    block_maps.reserve(static_cast<size_t>(t.block_count()));
    for (Index i = 0; i < t.block_count(); ++i) {
        RealMatrix g(2 * n * n, d);
        for (Index j = 0; j < d; ++j)
            g.col(j) = encode_block(commutator(t.block(i).matrix(), basis[static_cast<size_t>(j)]));
        auto& dec = block_maps.emplace_back(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
        dec.setThreshold(1e-12);
    }

    const double dnorm = delta.norm();
    ComplexMatrix a = delta / std::max(1.0, lipschitz_seminorm(t, HermitianMatrix(delta)));
    // Step measured in Frobenius units: one initial step spans roughly the
    // seminorm-one ball.
    double step = 1.0 / std::max(lipschitz_seminorm(t, HermitianMatrix(delta)) / dnorm, 1e-12);

    double best_value = -std::numeric_limits<double>::infinity();
    HermitianMatrix best_a;
    const auto record = [&]() {
        const auto rounded = round_primal(t, HermitianMatrix(a), delta);
        if (rounded.first > best_value) {
            best_value = rounded.first;
            best_a = rounded.second;
        }
    };
    record();

    const long phases = 30;
    const long per_phase = std::clamp<long>(cfg.max_iter / phases, 10, 2000);
    long total = 0;
    long stale_phases = 0;
    for (long p = 0; p < phases && stale_phases < 3 && total < cfg.max_iter; ++p) {
        const double before = best_value;
        for (long k = 0; k < per_phase && total < cfg.max_iter; ++k, ++total) {
            a += (step / dnorm) * delta;
            for (int sweep = 0; sweep < 5; ++sweep) {
                double worst = 0.0;
                for (Index i = 0; i < t.block_count(); ++i) {
                    const ComplexMatrix c = commutator(t.block(i).matrix(), a);
                    const double s = operator_norm(c);
                    worst = std::max(worst, s);
                    if (s > 1.0 + 1e-12) {
                        const ComplexMatrix clipped = clip_to_operator_ball(c, 1.0);
                        const RealVector corr =
                            block_maps[static_cast<size_t>(i)].solve(encode_block(clipped - c));
                        for (Index j = 0; j < d; ++j) a += corr(j) * basis[static_cast<size_t>(j)];
                    }
                }
                if (worst <= 1.0 + 1e-9) break;
            }
            record();
        }
        if (best_value <= before + 1e-14 * std::max(1.0, std::abs(before)))
            ++stale_phases;
        else
            stale_phases = 0;
        step *= 0.5;
    }
    record();
    return {best_value, best_a};
}

} // namespace specdist
