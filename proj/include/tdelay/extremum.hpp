#pragma once

#include <functional>

namespace tdelay {

struct Extremum
{
    double location = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than x_tol (absolute) or after
/// max_iterations reductions.
Extremum golden_section_maximize(const std::function<double(double)>& f,
                                 double lo,
                                 double hi,
                                 double x_tol = 1e-12,
                                 int max_iterations = 500);

/// Bisection for a sign change of f on [lo, hi]. Requires f(lo) and f(hi) to
/// have opposite signs (or one of them zero).
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double x_tol = 0.0, int max_iterations = 200);

}  // namespace tdelay
