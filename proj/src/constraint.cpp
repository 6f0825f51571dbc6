// constraint.cpp — materialized constraint map, pseudoinverse, norm estimate.

#include "specdist/constraint.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "specdist/errors.hpp"

namespace specdist {

namespace {

constexpr double kRankRelCut = 1e-12;  // singular values below this (relative) are zero
constexpr double kNormSafety = 1.005;  // inflation applied to the power-iteration estimate
constexpr unsigned kPowerSeed = 0x5eed; // fixed start vector seed: build is deterministic

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

/// sqrt of the largest eigenvalue of the range Gram matrix M M^T, estimated by
/// power iteration from a seeded start vector. The Rayleigh quotient never
/// exceeds the true top singular value, so the caller inflates the result.
double power_iteration_norm(const RealMatrix& m) {
    if (m.size() == 0) return 0.0;
    const RealMatrix gram = m * m.transpose();
    std::mt19937 rng(kPowerSeed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealVector v(gram.rows());
    for (Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    const double vnorm = v.norm();
    if (vnorm == 0.0) return 0.0;
    v /= vnorm;
    double lambda = 0.0;
    for (int step = 0; step < 20000; ++step) {
        RealVector w = gram * v;
        const double next = v.dot(w);
        const double wnorm = w.norm();
        if (wnorm <= 0.0) return 0.0; // zero map
        v = w / wnorm;
        if (step > 50 && std::abs(next - lambda) <= 1e-14 * std::max(next, 1.0)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

} // namespace

// ------------------------------ coordinate maps -----------------------------

RealVector ConstraintOperator::encode_domain(const OneForm& u) const {
    if (u.block_count() != block_count_)
        throw ShapeError("one-form has " + std::to_string(u.block_count()) +
                         " blocks, operator expects " + std::to_string(block_count_));
    const Index n = n_;
    RealVector coords(domain_dim());
    Index at = 0;
    for (const auto& b : u.blocks) {
        if (b.rows() != n || b.cols() != n) throw ShapeError("one-form block has wrong size");
        if (!antihermitian_) {
            for (Index c = 0; c < n; ++c) {
                for (Index r = 0; r < n; ++r) {
                    coords(at++) = b(r, c).real();
                    coords(at++) = b(r, c).imag();
                }
            }
        } else {
            for (Index k = 0; k < n; ++k) coords(at++) = b(k, k).imag();
            for (Index j = 0; j < n; ++j) {
                for (Index k = j + 1; k < n; ++k) {
                    coords(at++) = (b(j, k).real() - b(k, j).real()) * kInvSqrt2;
                    coords(at++) = (b(j, k).imag() + b(k, j).imag()) * kInvSqrt2;
                }
            }
        }
    }
    return coords;
}

OneForm ConstraintOperator::decode_domain(const RealVector& coords) const {
    if (coords.size() != domain_dim())
        throw ShapeError("domain coordinate vector has size " + std::to_string(coords.size()) +
                         ", expected " + std::to_string(domain_dim()));
    const Index n = n_;
    OneForm u;
    u.blocks.assign(static_cast<size_t>(block_count_), ComplexMatrix::Zero(n, n));
    Index at = 0;
    for (auto& b : u.blocks) {
        if (!antihermitian_) {
            for (Index c = 0; c < n; ++c) {
                for (Index r = 0; r < n; ++r) {
                    const double re = coords(at++);
                    const double im = coords(at++);
                    b(r, c) = Complex(re, im);
                }
            }
        } else {
            for (Index k = 0; k < n; ++k) b(k, k) = Complex(0.0, coords(at++));
            for (Index j = 0; j < n; ++j) {
                for (Index k = j + 1; k < n; ++k) {
                    const double p = coords(at++);
                    const double q = coords(at++);
                    b(j, k) = Complex(p * kInvSqrt2, q * kInvSqrt2);
                    b(k, j) = Complex(-p * kInvSqrt2, q * kInvSqrt2);
                }
            }
        }
    }
    return u;
}

RealVector ConstraintOperator::encode_range(const ComplexMatrix& m) const {
    if (m.rows() != n_ || m.cols() != n_)
        throw ShapeError("range element has size " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(n_) + "x" +
                         std::to_string(n_));
    RealVector coords(range_dim());
    Index at = 0;
    if (algebra_ == Algebra::Full) {
        for (Index c = 0; c < n_; ++c) {
            for (Index r = 0; r < n_; ++r) {
                coords(at++) = m(r, c).real();
                coords(at++) = m(r, c).imag();
            }
        }
    } else {
        for (Index k = 0; k < n_; ++k) {
            coords(at++) = m(k, k).real();
            coords(at++) = m(k, k).imag();
        }
    }
    return coords;
}

ComplexMatrix ConstraintOperator::decode_range(const RealVector& coords) const {
    if (coords.size() != range_dim())
        throw ShapeError("range coordinate vector has size " + std::to_string(coords.size()) +
                         ", expected " + std::to_string(range_dim()));
    ComplexMatrix m = ComplexMatrix::Zero(n_, n_);
    Index at = 0;
    if (algebra_ == Algebra::Full) {
        for (Index c = 0; c < n_; ++c) {
            for (Index r = 0; r < n_; ++r) {
                const double re = coords(at++);
                const double im = coords(at++);
                m(r, c) = Complex(re, im);
            }
        }
    } else {
        for (Index k = 0; k < n_; ++k) {
            const double re = coords(at++);
            const double im = coords(at++);
            m(k, k) = Complex(re, im);
        }
    }
    return m;
}

// ------------------------------- applications -------------------------------

ComplexMatrix ConstraintOperator::apply(const OneForm& u) const {
    return decode_range(matrix_ * encode_domain(u));
}

OneForm ConstraintOperator::apply_adjoint(const ComplexMatrix& a) const {
    return decode_domain(matrix_.transpose() * encode_range(a));
}

RealVector ConstraintOperator::apply_pinv(const RealVector& range_coords) const {
    if (range_coords.size() != range_dim())
        throw ShapeError("range coordinate vector has size " +
                         std::to_string(range_coords.size()) + ", expected " +
                         std::to_string(range_dim()));
    if (rank_ == 0) return RealVector::Zero(domain_dim());
    const RealVector projected = pinv_u_.transpose() * range_coords;
    return pinv_v_ * (projected.array() / pinv_sigma_.array()).matrix();
}

// ---------------------------------- builder ---------------------------------

ConstraintOperator build_constraint_operator(const SpectralTripleSpec& t,
                                             bool restrict_antihermitian) {
    ConstraintOperator op;
    op.antihermitian_ = restrict_antihermitian;
    op.algebra_ = t.algebra();
    op.n_ = t.dim();
    op.block_count_ = t.block_count();

    const Index n = t.dim();
    const Index per_block = restrict_antihermitian ? n * n : 2 * n * n;
    const Index domain = per_block * t.block_count();
    const Index range = t.algebra() == Algebra::Full ? 2 * n * n : 2 * n;
    op.matrix_.resize(range, domain);

    // Column j is K applied to the j-th domain basis one-form. Only the block
    // the coordinate lives in contributes a commutator.
    RealVector unit = RealVector::Zero(domain);
    for (Index j = 0; j < domain; ++j) {
        unit(j) = 1.0;
        const OneForm basis = op.decode_domain(unit);
        unit(j) = 0.0;
        const Index blk = j / per_block;
        const ComplexMatrix image =
            commutator(t.block(blk).matrix(), basis.blocks[static_cast<size_t>(blk)]);
        op.matrix_.col(j) = op.encode_range(algebra_projection(t, image));
    }

    Eigen::JacobiSVD<RealMatrix> dec(op.matrix_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        throw NumericError("constraint operator factorization failed");
    const auto& sv = dec.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > kRankRelCut * top && sv(rank) > 0.0) ++rank;
    op.rank_ = rank;
    op.pinv_u_ = dec.matrixU().leftCols(rank);
    op.pinv_v_ = dec.matrixV().leftCols(rank);
    op.pinv_sigma_ = sv.head(rank);

    op.norm_bound_ = kNormSafety * power_iteration_norm(op.matrix_);
    return op;
}

} // namespace specdist
