// transport1d.cpp — exact 1D optimal transport via cumulative differences.

#include "specdist/transport1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specdist/errors.hpp"

namespace specdist {

namespace {

constexpr double kMassTol = 1e-12;   // |sum of weights - 1| allowed
constexpr double kSlopeDead = 1e-12; // |F_mu - F_nu| treated as zero for slopes

void require_finite_vector(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw ShapeError(std::string(what) + " contains a non-finite entry");
}

void require_increasing(const std::vector<double>& v, const char* what) {
    for (size_t j = 1; j < v.size(); ++j)
        if (!(v[j] > v[j - 1])) throw ShapeError(std::string(what) + " must be strictly increasing");
}

} // namespace

// ----------------------------- DiscreteMeasure1D ----------------------------

DiscreteMeasure1D::DiscreteMeasure1D(std::vector<double> positions, std::vector<double> weights)
    : positions_(std::move(positions)), weights_(std::move(weights)) {
    if (positions_.empty()) throw ShapeError("measure needs at least one support point");
    if (positions_.size() != weights_.size())
        throw ShapeError("measure has " + std::to_string(positions_.size()) + " positions but " +
                         std::to_string(weights_.size()) + " weights");
    require_finite_vector(positions_, "positions");
    require_finite_vector(weights_, "weights");
    require_increasing(positions_, "positions");
    double mass = 0.0;
    for (double w : weights_) {
        if (w < 0.0) throw ShapeError("weights must be nonnegative");
        mass += w;
    }
    if (std::abs(mass - 1.0) > kMassTol)
        throw ShapeError("weights sum to " + std::to_string(mass) + ", expected 1");
}

// ------------------------------- StepFunction --------------------------------

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.empty()) throw ShapeError("step function needs at least one breakpoint");
    if (values_.size() + 1 != breakpoints_.size())
        throw ShapeError("step function needs exactly one value per interval");
    require_finite_vector(breakpoints_, "breakpoints");
    require_finite_vector(values_, "values");
    require_increasing(breakpoints_, "breakpoints");
}

double StepFunction::evaluate(double x) const {
    if (x < breakpoints_.front() || x >= breakpoints_.back()) return 0.0;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const size_t j = static_cast<size_t>(it - breakpoints_.begin()) - 1;
    return values_[j];
}

double StepFunction::abs_integral() const {
    double total = 0.0;
    for (size_t j = 0; j < values_.size(); ++j)
        total += std::abs(values_[j]) * (breakpoints_[j + 1] - breakpoints_[j]);
    return total;
}

// ----------------------------- PiecewiseLinear1Lip ---------------------------

PiecewiseLinear1Lip::PiecewiseLinear1Lip(std::vector<double> breakpoints,
                                         std::vector<double> slopes, double value_at_left)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)),
      value_at_left_(value_at_left) {
    if (breakpoints_.empty())
        throw ShapeError("piecewise-linear function needs at least one breakpoint");
    if (slopes_.size() + 1 != breakpoints_.size())
        throw ShapeError("piecewise-linear function needs exactly one slope per interval");
    if (!std::isfinite(value_at_left_)) throw ShapeError("value at leftmost breakpoint not finite");
    require_finite_vector(breakpoints_, "breakpoints");
    require_finite_vector(slopes_, "slopes");
    require_increasing(breakpoints_, "breakpoints");
    for (double s : slopes_)
        if (std::abs(s) > 1.0 + 1e-12) throw ShapeError("slope magnitude exceeds 1");
}

std::vector<double> PiecewiseLinear1Lip::breakpoint_values() const {
    std::vector<double> values(breakpoints_.size());
    values[0] = value_at_left_;
    for (size_t j = 0; j < slopes_.size(); ++j)
        values[j + 1] = values[j] + slopes_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
    return values;
}

double PiecewiseLinear1Lip::evaluate(double x) const {
    const std::vector<double> values = breakpoint_values();
    if (x <= breakpoints_.front()) return values.front();
    if (x >= breakpoints_.back()) return values.back();
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const size_t j = static_cast<size_t>(it - breakpoints_.begin());
    return values[j - 1] + slopes_[j - 1] * (x - breakpoints_[j - 1]);
}

// -------------------------------- operations --------------------------------

std::vector<double> merged_support(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu) {
    std::vector<double> merged;
    merged.reserve(mu.size() + nu.size());
    std::merge(mu.positions().begin(), mu.positions().end(), nu.positions().begin(),
               nu.positions().end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

StepFunction cumulative_difference(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu) {
    const std::vector<double> grid = merged_support(mu, nu);
    std::vector<double> values(grid.size() - 1);
    double cum = 0.0;
    size_t imu = 0;
    size_t inu = 0;
    for (size_t j = 0; j + 1 < grid.size(); ++j) {
        if (imu < mu.size() && mu.positions()[imu] == grid[j]) cum += mu.weights()[imu++];
        if (inu < nu.size() && nu.positions()[inu] == grid[j]) cum -= nu.weights()[inu++];
        values[j] = cum;
    }
    return StepFunction(grid, std::move(values));
}

double w1_distance(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu) {
    return cumulative_difference(mu, nu).abs_integral();
}

PiecewiseLinear1Lip optimal_potential(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu) {
    const StepFunction w = cumulative_difference(mu, nu);
    std::vector<double> slopes(w.interval_count());
    for (size_t j = 0; j < slopes.size(); ++j) {
        const double wj = w.values()[j];
        slopes[j] = std::abs(wj) <= kSlopeDead ? 0.0 : (wj > 0.0 ? 1.0 : -1.0);
    }
    return PiecewiseLinear1Lip(w.breakpoints(), std::move(slopes), 0.0);
}

double potential_pairing(const PiecewiseLinear1Lip& f, const DiscreteMeasure1D& mu,
                         const DiscreteMeasure1D& nu) {
    double total = 0.0;
    for (size_t j = 0; j < mu.size(); ++j) total += f.evaluate(mu.positions()[j]) * mu.weights()[j];
    for (size_t j = 0; j < nu.size(); ++j) total -= f.evaluate(nu.positions()[j]) * nu.weights()[j];
    return total;
}

// -------------------------------- line_triple --------------------------------

SpectralTripleSpec line_triple(const std::vector<double>& positions) {
    const size_t m = positions.size();
    if (m < 2) throw ShapeError("line triple needs at least two grid points");
    require_finite_vector(positions, "positions");
    require_increasing(positions, "positions");
    const Index n = static_cast<Index>(m);
    std::vector<HermitianMatrix> blocks;
    blocks.reserve(m - 1);
    for (size_t i = 0; i + 1 < m; ++i) {
        const double dx = positions[i + 1] - positions[i];
        ComplexMatrix l = ComplexMatrix::Zero(n, n);
        l(static_cast<Index>(i), static_cast<Index>(i) + 1) = 1.0 / dx;
        l(static_cast<Index>(i) + 1, static_cast<Index>(i)) = 1.0 / dx;
        blocks.emplace_back(std::move(l));
    }
    return SpectralTripleSpec(std::move(blocks), Algebra::Diagonal);
}

} // namespace specdist
