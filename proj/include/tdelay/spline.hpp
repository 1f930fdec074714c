#pragma once

#include <span>
#include <vector>

namespace tdelay {

/// Interpolating cubic spline on a strictly increasing, non-uniform grid.
///
/// End slopes are clamped to the second-order one-sided differences of the
/// data, which keeps the derivative accurate to O(h^2) at the ends instead of
/// the O(1) error a natural spline would leave there.
class CubicSpline
{
  public:
    CubicSpline() = default;
    CubicSpline(std::span<const double> x, std::span<const double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }

  private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace tdelay
