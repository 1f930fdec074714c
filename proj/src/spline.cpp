#include "tdelay/spline.hpp"

#include "tdelay/error.hpp"

#include <algorithm>

namespace tdelay {

namespace {

// Derivative at t of the quadratic through three points.
double quadratic_slope(const double* x, const double* y, double t)
{
    const double d0 = ((t - x[1]) + (t - x[2])) / ((x[0] - x[1]) * (x[0] - x[2]));
    const double d1 = ((t - x[0]) + (t - x[2])) / ((x[1] - x[0]) * (x[1] - x[2]));
    const double d2 = ((t - x[0]) + (t - x[1])) / ((x[2] - x[0]) * (x[2] - x[1]));
    return y[0] * d0 + y[1] * d1 + y[2] * d2;
}

}  // namespace

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0)
{
    const std::size_t n = x_.size();
    if (n != y_.size() || n < 2) {
        throw Error(ErrorCode::InvalidArgument, "spline needs at least two (x, y) pairs of equal length");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) throw Error(ErrorCode::InvalidArgument, "spline abscissae must increase strictly");
    }
    if (n == 2) return;

    const double s_first = quadratic_slope(&x_[0], &y_[0], x_[0]);
    const double s_last = quadratic_slope(&x_[n - 3], &y_[n - 3], x_[n - 1]);

    // Clamped tridiagonal system for the knot curvatures, solved by Thomas.
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    const double h0 = x_[1] - x_[0];
    diag[0] = 2.0 * h0;
    upper[0] = h0;
    rhs[0] = 6.0 * ((y_[1] - y_[0]) / h0 - s_first);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double ha = x_[i] - x_[i - 1];
        const double hb = x_[i + 1] - x_[i];
        lower[i] = ha;
        diag[i] = 2.0 * (ha + hb);
        upper[i] = hb;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hb - (y_[i] - y_[i - 1]) / ha);
    }
    const double hn = x_[n - 1] - x_[n - 2];
    lower[n - 1] = hn;
    diag[n - 1] = 2.0 * hn;
    rhs[n - 1] = 6.0 * (s_last - (y_[n - 1] - y_[n - 2]) / hn);

    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m_[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    }
}

std::size_t CubicSpline::segment(double x) const
{
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double CubicSpline::operator()(double x) const
{
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - x;
    const double b = x - x_[i];
    return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) + (y_[i] / h - m_[i] * h / 6.0) * a +
           (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
}

double CubicSpline::derivative(double x) const
{
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - x;
    const double b = x - x_[i];
    return -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) + (y_[i + 1] - y_[i]) / h -
           (m_[i + 1] - m_[i]) * h / 6.0;
}

}  // namespace tdelay
