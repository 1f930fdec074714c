#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace tdelay {

struct QuadratureOptions
{
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    std::size_t max_intervals = 1'000'000;
};

struct QuadratureResult
{
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over [lo, hi].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|). The optional
/// breakpoints seed the initial partition; points outside (lo, hi) are
/// ignored. Throws Error(NonFiniteWindow) for infinite bounds and
/// Error(QuadratureFailure) when the interval budget runs out or the
/// integrand returns a non-finite value.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo,
                                    double hi,
                                    const QuadratureOptions& options = {},
                                    std::span<const double> breakpoints = {});

}  // namespace tdelay
