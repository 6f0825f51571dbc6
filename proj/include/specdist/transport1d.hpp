// transport1d.hpp — exact Wasserstein-1 transport between discrete measures on
// the real line: cumulative-difference step functions, closed-form distances,
// optimal 1-Lipschitz potentials, and the matching line-graph spectral triple.

#pragma once

#include <vector>

#include "specdist/triple.hpp"

namespace specdist {

// ---------------------------------- types ----------------------------------

/// Probability measure sum_j w_j delta_{x_j} with strictly increasing support
/// points and nonnegative weights summing to one (within 1e-12).
class DiscreteMeasure1D {
  public:
    DiscreteMeasure1D(std::vector<double> positions, std::vector<double> weights);

    const std::vector<double>& positions() const noexcept { return positions_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    size_t size() const noexcept { return positions_.size(); }

  private:
    std::vector<double> positions_;
    std::vector<double> weights_;
};

/// Right-continuous step function: values()[j] holds on
/// [breakpoints()[j], breakpoints()[j+1]); zero outside the outermost
/// breakpoints. A single breakpoint with no values is the zero function.
class StepFunction {
  public:
    StepFunction(std::vector<double> breakpoints, std::vector<double> values);

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }
    size_t interval_count() const noexcept { return values_.size(); }

    double evaluate(double x) const;

    /// Integral of |f| over the real line (finite: f vanishes outside the
    /// breakpoint range).
    double abs_integral() const;

  private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// Continuous piecewise-linear function stored as breakpoints, one slope per
/// interval with |slope| <= 1, and the value at the leftmost breakpoint;
/// extended by constants outside the breakpoint range, hence 1-Lipschitz on
/// the whole line.
class PiecewiseLinear1Lip {
  public:
    PiecewiseLinear1Lip(std::vector<double> breakpoints, std::vector<double> slopes,
                        double value_at_left);

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& slopes() const noexcept { return slopes_; }
    double value_at_left() const noexcept { return value_at_left_; }

    double evaluate(double x) const;

    /// Function values at the breakpoints, accumulated from value_at_left.
    std::vector<double> breakpoint_values() const;

  private:
    std::vector<double> breakpoints_;
    std::vector<double> slopes_;
    double value_at_left_ = 0.0;
};

// -------------------------------- operations --------------------------------

/// F_mu - F_nu as a right-continuous step function over the merged sorted
/// support of the two measures; its final value is zero because both measures
/// carry unit mass.
StepFunction cumulative_difference(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu);

/// W_1(mu, nu) = integral of |F_mu - F_nu|, the exact one-dimensional
/// optimal-transport cost for the |x - y| ground metric.
double w1_distance(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu);

/// A Kantorovich potential attaining w1_distance: slope sign(F_mu - F_nu) on
/// each interval (zero where |F_mu - F_nu| <= 1e-12), anchored to zero at the
/// leftmost merged support point.
PiecewiseLinear1Lip optimal_potential(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu);

/// Kantorovich objective sum_x f(x) mu({x}) - sum_y f(y) nu({y}).
double potential_pairing(const PiecewiseLinear1Lip& f, const DiscreteMeasure1D& mu,
                         const DiscreteMeasure1D& nu);

/// Merged, sorted, deduplicated support of two measures.
std::vector<double> merged_support(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu);

/// Diagonal-algebra spectral triple on the line graph with vertex set
/// {x_1, ..., x_m}: one block per edge, L_i = (E_{i,i+1} + E_{i+1,i}) /
/// (x_{i+1} - x_i). Lipschitz elements are exactly the 1-Lipschitz functions
/// on the grid, so the spectral distance between vertex states reproduces W_1.
SpectralTripleSpec line_triple(const std::vector<double>& positions);

} // namespace specdist
