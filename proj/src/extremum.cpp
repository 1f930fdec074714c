#include "tdelay/extremum.hpp"

#include "tdelay/error.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace tdelay {

Extremum golden_section_maximize(const std::function<double(double)>& f,
                                 double lo,
                                 double hi,
                                 double x_tol,
                                 int max_iterations)
{
    if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "golden-section bracket must satisfy lo < hi");
    constexpr double inv_phi = 1.0 / std::numbers::phi;

    double a = lo;
    double b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = f(c);
    double fd = f(d);
    int it = 0;
    for (; it < max_iterations && (b - a) > x_tol; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
        if (!(c < d)) break;  // bracket collapsed to adjacent doubles
    }
    const double x = 0.5 * (a + b);
    return {x, f(x), it};
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double x_tol, int max_iterations)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw Error(ErrorCode::InvalidArgument, "bisection bracket does not straddle a sign change");
    }
    for (int i = 0; i < max_iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi) || (hi - lo) <= x_tol) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace tdelay
