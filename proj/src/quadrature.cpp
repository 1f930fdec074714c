#include "tdelay/quadrature.hpp"

#include "tdelay/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace tdelay {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the Gauss-7 nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double lo;
    double hi;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const std::function<double(double)>& f, double x)
{
    const double y = f(x);
    if (!std::isfinite(y)) {
        throw Error(ErrorCode::QuadratureFailure, "integrand is not finite at x = " + std::to_string(x));
    }
    return y;
}

Panel kronrod15(const std::function<double(double)>& f, double lo, double hi)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = checked(f, center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = checked(f, center - dx) + checked(f, center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo,
                                    double hi,
                                    const QuadratureOptions& options,
                                    std::span<const double> breakpoints)
{
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::NonFiniteWindow, "integration bounds must be finite");
    }
    if (lo == hi) return {};
    const double sign = hi > lo ? 1.0 : -1.0;
    if (sign < 0) std::swap(lo, hi);

    std::vector<double> cuts{lo};
    for (double b : breakpoints) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> panels;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = kronrod15(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_error += p.error;
        panels.push(p);
    }
    std::size_t count = panels.size();

    // Panels too narrow to split are parked here; their error stays in the total.
    double frozen_error = 0.0;
    auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

    while (total_error > tolerance()) {
        if (panels.empty() || frozen_error > tolerance()) {
            throw Error(ErrorCode::QuadratureFailure,
                        "roundoff limit reached with error estimate " + std::to_string(total_error));
        }
        if (count >= options.max_intervals) {
            throw Error(ErrorCode::QuadratureFailure,
                        "interval budget of " + std::to_string(options.max_intervals) + " exhausted");
        }
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            frozen_error += worst.error;
            continue;
        }
        const Panel left = kronrod15(f, worst.lo, mid);
        const Panel right = kronrod15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }
    return {sign * total, total_error, count};
}

}  // namespace tdelay
