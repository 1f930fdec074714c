#include "tdelay/resonance.hpp"

#include "tdelay/constants.hpp"
#include "tdelay/error.hpp"
#include "tdelay/extremum.hpp"

#include <cmath>

namespace tdelay {

Resonance::Resonance(double e0, double gamma) : e0_(e0), gamma_(gamma)
{
    if (!std::isfinite(e0) || !std::isfinite(gamma) || !(gamma > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "resonance needs finite E0 and Gamma > 0");
    }
}

void DelayProfile::validate() const
{
    if (!std::isfinite(window_lo) || !std::isfinite(window_hi)) {
        throw Error(ErrorCode::NonFiniteWindow, "delay profile window must be finite");
    }
    if (!(window_lo < window_hi)) {
        throw Error(ErrorCode::InvalidArgument, "delay profile window must satisfy lo < hi");
    }
}

double bw_phase_shift(double e, const Resonance& r, double background_phase)
{
    // phi - atan((G/2)/(E-E0)) lifted to the branch continuous through E0.
    return background_phase + 0.5 * kPi + std::atan(2.0 * (e - r.e0()) / r.gamma());
}

double bw_time_delay(double e, const Resonance& r)
{
    const double x = e - r.e0();
    const double hg = 0.5 * r.gamma();
    return r.gamma() / (x * x + hg * hg);
}

double bw_delay_derivative(double e, const Resonance& r)
{
    const double x = e - r.e0();
    const double hg = 0.5 * r.gamma();
    const double d = x * x + hg * hg;
    return -2.0 * r.gamma() * x / (d * d);
}

double phase_shift(const DelayProfile& p, double e)
{
    double sum = p.background_phase;
    for (const auto& r : p.resonances) sum += bw_phase_shift(e, r);
    return sum;
}

double time_delay(const DelayProfile& p, double e)
{
    double sum = 0.0;
    for (const auto& r : p.resonances) sum += bw_time_delay(e, r);
    return sum;
}

double delay_derivative(const DelayProfile& p, double e)
{
    double sum = 0.0;
    for (const auto& r : p.resonances) sum += bw_delay_derivative(e, r);
    return sum;
}

MaxSlope delay_profile_max_slope(const Resonance& r)
{
    const double g = r.gamma();
    return {r.e0() - g / (2.0 * std::sqrt(3.0)), kThreeSqrt3 / (g * g)};
}

MaxSlope delay_profile_max_slope_numeric(const Resonance& r, double rel_tol)
{
    // Search in the scaled offset u = (E - E0)/Gamma so the bracket tolerance
    // is relative to the width rather than to |E0|.
    const Resonance unit(0.0, 1.0);
    const auto best = golden_section_maximize([&](double u) { return bw_delay_derivative(u, unit); }, -1.0, 0.0, rel_tol);
    const double g = r.gamma();
    return {r.e0() + best.location * g, bw_delay_derivative(r.e0() + best.location * g, r)};
}

QuadratureResult integrate_time_delay(const DelayProfile& p, IntegrationMethod method, const QuadratureOptions& options)
{
    p.validate();
    if (p.resonances.empty()) return {};
    if (method == IntegrationMethod::Analytic) {
        double sum = 0.0;
        for (const auto& r : p.resonances) {
            sum += 2.0 * (std::atan(2.0 * (p.window_hi - r.e0()) / r.gamma()) -
                          std::atan(2.0 * (p.window_lo - r.e0()) / r.gamma()));
        }
        return {sum, 0.0, 0};
    }
    std::vector<double> cuts;
    cuts.reserve(p.resonances.size());
    for (const auto& r : p.resonances) cuts.push_back(r.e0());
    return integrate_adaptive([&](double e) { return time_delay(p, e); }, p.window_lo, p.window_hi, options, cuts);
}

double count_resonances(const DelayProfile& p, IntegrationMethod method, const QuadratureOptions& options)
{
    return integrate_time_delay(p, method, options).value / kTwoPi;
}

double sojourn_time(double e, double a, double delta, double ddelta_dk)
{
    if (e == 0.0) throw Error(ErrorCode::ZeroEnergy, "sojourn time is singular at E = 0 (v = 0)");
    if (!(e > 0.0)) throw Error(ErrorCode::InvalidArgument, "sojourn time needs E > 0");
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "sojourn time needs sphere radius a > 0");
    const double k = std::sqrt(e);
    const double v = 2.0 * k;
    return (2.0 / v) * (ddelta_dk + a - std::sin(2.0 * (k * a + delta)) / (2.0 * k));
}

}  // namespace tdelay
