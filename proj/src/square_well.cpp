#include "tdelay/square_well.hpp"

#include "tdelay/constants.hpp"
#include "tdelay/error.hpp"
#include "tdelay/extremum.hpp"
#include "tdelay/format.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace tdelay {

namespace {

// Spherical Bessel functions of order 1 and their derivatives. The regular
// ones switch to their Taylor series below x = 0.05, where the closed forms
// cancel catastrophically.
double sph_j1(double x)
{
    if (std::abs(x) < 0.05) {
        const double x2 = x * x;
        return x * (1.0 / 3.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 840.0 - x2 / 45360.0)));
    }
    return std::sin(x) / (x * x) - std::cos(x) / x;
}

double sph_j1_prime(double x)
{
    if (std::abs(x) < 0.05) {
        const double x2 = x * x;
        return 1.0 / 3.0 - x2 * (1.0 / 10.0 - x2 * (1.0 / 168.0 - x2 / 6480.0));
    }
    return 2.0 * std::cos(x) / (x * x) + (x * x - 2.0) * std::sin(x) / (x * x * x);
}

double sph_y1(double x) { return -std::cos(x) / (x * x) - std::sin(x) / x; }

double sph_y1_prime(double x) { return (2.0 - x * x) * std::cos(x) / (x * x * x) + 2.0 * std::sin(x) / (x * x); }

// Riccati-Bessel pair, jhat ~ sin(x - l pi/2) and nhat ~ -cos(x - l pi/2).
void riccati(int ell, double x, double& jhat, double& nhat)
{
    if (ell == 0) {
        jhat = std::sin(x);
        nhat = -std::cos(x);
    } else {
        jhat = x * sph_j1(x);
        nhat = x * sph_y1(x);
    }
}

// Reduce an angle to (-pi/2, pi/2].
double wrap_half_pi(double a)
{
    double r = a - kPi * std::round(a / kPi);
    if (r <= -0.5 * kPi) r += kPi;
    if (r > 0.5 * kPi) r -= kPi;
    return r;
}

void require_positive_k(double k)
{
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorCode::InvalidArgument, "wavenumber must be positive");
}

// Continuous l = 0 interior phase: theta with tan(theta) = (k/K) tan(KR),
// on the same half-turn as KR.
double s_wave_theta(const SquareWell& well, double k)
{
    const double big_k = std::sqrt(k * k + well.depth());
    const double kr = big_k * well.radius();
    const double m = std::round(kr / kPi);
    const double y = kr - m * kPi;
    return m * kPi + std::atan2(k * std::sin(y), big_k * std::cos(y));
}

// Bound-state matching functions of K (interior wavenumber); zeros for
// 0 < K < sqrt(V0) are the bound states. Both are free of poles.
double s_wave_matching(const SquareWell& well, double big_k)
{
    const double kappa = std::sqrt(std::max(0.0, well.depth() - big_k * big_k));
    const double x = big_k * well.radius();
    return big_k * std::cos(x) + kappa * std::sin(x);
}

double p_wave_matching(const SquareWell& well, double big_k)
{
    // Wronskian of jhat_1(Kr) with e^{-kappa r}(1 + 1/(kappa r)), times kappa R e^{kappa R}.
    const double r = well.radius();
    const double kappa = std::sqrt(std::max(0.0, well.depth() - big_k * big_k));
    const double x = big_k * r;
    const double jhat = x * sph_j1(x);
    const double jhat_prime = sph_j1(x) + x * sph_j1_prime(x);
    return big_k * jhat_prime * (kappa * r + 1.0) + jhat * (kappa * (kappa * r + 1.0) + 1.0 / r);
}


// Zeros of x j1(x) = sin x / x - cos x in (0, x_end]; the m-th zero lies in
// (m pi, m pi + pi/2).
int p_wave_zero_count(double x_end)
{
    const int whole = static_cast<int>(std::floor(x_end / kPi));
    if (whole < 1) return 0;
    auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
    const double last = bisect_root(f, whole * kPi, whole * kPi + 0.5 * kPi);
    return whole - 1 + (last <= x_end ? 1 : 0);
}

// Lifted Pruefer angle of the ray (u, u') for u = jhat_1(c r) at r = radius:
// pi per interior node plus the ray angle atan2(u, u') reduced to [0, pi).
double p_wave_pruefer_angle(double c, double radius)
{
    const double x = c * radius;
    const double u = x * sph_j1(x);
    const double du = c * (sph_j1(x) + x * sph_j1_prime(x));
    double frac = std::atan2(u, du);
    if (frac < 0.0) frac += kPi;
    if (frac >= kPi) frac -= kPi;
    return kPi * p_wave_zero_count(x) + frac;
}

}  // namespace

SquareWell::SquareWell(double depth, double radius, int ell) : depth_(depth), radius_(radius), ell_(ell)
{
    if (!(depth > 0.0) || !std::isfinite(depth)) throw Error(ErrorCode::InvalidArgument, "well depth must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidArgument, "well radius must be positive");
    if (ell != 0 && ell != 1) throw Error(ErrorCode::InvalidArgument, "only partial waves l = 0 and l = 1 are supported");
}

double phase_shift_principal(const SquareWell& well, double k)
{
    require_positive_k(k);
    if (well.ell() == 0) return wrap_half_pi(s_wave_theta(well, k) - k * well.radius());

    const double r = well.radius();
    const double big_k = std::sqrt(k * k + well.depth());
    const double x_in = big_k * r;
    const double x_out = k * r;
    // tan(delta) = (k j1'(kR) - beta j1(kR)) / (k y1'(kR) - beta y1(kR)), beta = K j1'(KR)/j1(KR),
    // with numerator and denominator multiplied through by j1(KR).
    const double j_in = sph_j1(x_in);
    const double jp_in = sph_j1_prime(x_in);
    const double num = k * sph_j1_prime(x_out) * j_in - big_k * jp_in * sph_j1(x_out);
    const double den = k * sph_y1_prime(x_out) * j_in - big_k * jp_in * sph_y1(x_out);
    return wrap_half_pi(std::atan2(num, den));
}

double phase_shift_variable_phase(const SquareWell& well, double k, double tolerance)
{
    require_positive_k(k);
    using State = double;
    const double v0 = well.depth();
    const int ell = well.ell();
    auto rhs = [&](const State& delta, State& ddelta, double r) {
        const double x = k * r;
        if (x == 0.0) {
            ddelta = 0.0;
            return;
        }
        double jhat = 0.0;
        double nhat = 0.0;
        riccati(ell, x, jhat, nhat);
        const double amp = jhat * std::cos(delta) - nhat * std::sin(delta);
        ddelta = v0 / k * amp * amp;
    };
    // Near threshold with l > 0 the phase sits at ~1e-10 before a fast
    // Riccati-type rise, so the error control must be relative, not absolute.
    namespace ode = boost::numeric::odeint;
    State delta = 0.0;
    const double r = well.radius();
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(tolerance * 1e-12, tolerance), rhs, delta,
                            0.0, r, r * 1e-3);
    return delta;
}

double phase_shift(const SquareWell& well, double k)
{
    require_positive_k(k);
    if (well.ell() == 0) return s_wave_theta(well, k) - k * well.radius();

    // delta(R) is the angle of (u, u') in the frame spanned by the free
    // solutions; the map delta -> ray angle is increasing with period pi, so
    // the winding of delta is the winding of the interior ray relative to the
    // free one.
    const double principal = phase_shift_principal(well, k);
    const double winding = p_wave_pruefer_angle(std::sqrt(k * k + well.depth()), well.radius()) -
                           p_wave_pruefer_angle(k, well.radius());
    const double reduced = principal < 0.0 ? principal + kPi : principal;  // [0, pi)
    // Close to a multiple of pi the winding difference is ill-conditioned
    // (at small kR the free frame is nearly degenerate); there the reduced
    // phase tells on which side of the multiple delta lies.
    const double nearest = std::round(winding / kPi);
    if (std::abs(winding - nearest * kPi) < 1e-9 * (1.0 + std::abs(winding))) {
        return (reduced < 0.5 * kPi ? nearest : nearest - 1.0) * kPi + reduced;
    }
    return kPi * std::floor(winding / kPi) + reduced;
}

std::vector<double> bound_state_energies(const SquareWell& well)
{
    const double top = std::sqrt(well.depth());
    auto f = [&](double big_k) {
        return well.ell() == 0 ? s_wave_matching(well, big_k) : p_wave_matching(well, big_k);
    };
    // Roots are spaced by about pi / R in K; sample far more finely.
    const double windings = top * well.radius() / kPi;
    const int points = static_cast<int>(std::max(4000.0, 400.0 * (windings + 1.0)));
    const double k_lo = top * 1e-9;
    const double k_hi = top * (1.0 - 1e-14);

    std::vector<double> energies;
    double prev_k = k_lo;
    double prev_f = f(prev_k);
    for (int i = 1; i <= points; ++i) {
        const double kk = k_lo + (k_hi - k_lo) * i / points;
        const double fk = f(kk);
        if (fk == 0.0 || std::signbit(fk) != std::signbit(prev_f)) {
            const double root = bisect_root(f, prev_k, kk);
            energies.push_back(well.depth() - root * root);
        }
        prev_k = kk;
        prev_f = fk == 0.0 ? -prev_f : fk;
    }
    // Deepest first.
    std::sort(energies.begin(), energies.end(), std::greater<>());
    return energies;
}

int bound_state_count(const SquareWell& well) { return static_cast<int>(bound_state_energies(well).size()); }

PhaseShiftCurve PhaseShiftCurve::build(const SquareWell& well, const CurveOptions& options)
{
    if (!(options.k_min > 0.0) || !(options.k_max > options.k_min) || options.base_points < 2) {
        throw Error(ErrorCode::InvalidArgument, "curve needs 0 < k_min < k_max and at least two base points");
    }
    const int n = options.base_points;
    const double log_lo = std::log(options.k_min);
    const double log_hi = std::log(options.k_max);
    std::vector<double> base(n);
    for (int i = 0; i < n; ++i) base[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
    base.front() = options.k_min;
    base.back() = options.k_max;

    // Refined grid of (k, principal delta), ascending; base_mark flags base points.
    std::vector<double> ks;
    std::vector<double> ps;
    std::vector<bool> base_mark;
    ks.push_back(base[0]);
    ps.push_back(phase_shift_principal(well, base[0]));
    base_mark.push_back(true);

    auto refine = [&](auto&& self, double ka, double pa, double kb, double pb, int depth) -> void {
        const double jump = wrap_half_pi(pb - pa);
        const double mid = 0.5 * (ka + kb);
        const bool coarse = std::abs(jump) > options.max_step || (kb - ka) * well.radius() > options.max_k_step;
        if (coarse && depth < options.max_refine_depth && mid > ka && mid < kb) {
            const double pm = phase_shift_principal(well, mid);
            self(self, ka, pa, mid, pm, depth + 1);
            self(self, mid, pm, kb, pb, depth + 1);
            return;
        }
        if (std::abs(jump) > options.max_step) {
            throw Error(ErrorCode::RefinementFailure, "phase step not resolved near k = " + format_roundtrip(ka));
        }
        ks.push_back(kb);
        ps.push_back(pb);
        base_mark.push_back(false);
    };
    for (int i = 1; i < n; ++i) {
        const double pb = phase_shift_principal(well, base[i]);
        refine(refine, ks.back(), ps.back(), base[i], pb, 0);
        base_mark.back() = true;
    }

    // Unwrap from the top, where the branch nearest zero is the physical one.
    const std::size_t m = ks.size();
    std::vector<double> delta(m);
    delta[m - 1] = ps[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) delta[i] = delta[i + 1] + wrap_half_pi(ps[i] - ps[i + 1]);

    int base_seen = 0;
    for (std::size_t i = m; i-- > 0;) {
        if (!base_mark[i]) continue;
        const bool check = (base_seen++ % std::max(1, options.check_stride)) == 0 || i == 0;
        if (!check) continue;
        const double guide = phase_shift(well, ks[i]);
        if (std::abs(guide - delta[i]) > 0.25 * kPi) {
            throw Error(ErrorCode::RefinementFailure,
                        "unwrapped phase disagrees with the winding-count branch by " +
                            format_roundtrip(guide - delta[i]) + " at k = " + format_roundtrip(ks[i]));
        }
    }

    PhaseShiftCurve curve;
    curve.k_ = std::move(ks);
    curve.delta_ = std::move(delta);
    curve.spline_ = CubicSpline(curve.k_, curve.delta_);
    return curve;
}

double PhaseShiftCurve::delta_at(double k) const
{
    if (!(k >= k_min() && k <= k_max())) throw Error(ErrorCode::OutOfSpan, "k outside the phase-shift curve");
    return spline_(k);
}

double PhaseShiftCurve::ddelta_dk(double k) const
{
    if (!(k >= k_min() && k <= k_max())) throw Error(ErrorCode::OutOfSpan, "k outside the phase-shift curve");
    return spline_.derivative(k);
}

double PhaseShiftCurve::max_jump() const
{
    double jump = 0.0;
    for (std::size_t i = 1; i < delta_.size(); ++i) jump = std::max(jump, std::abs(delta_[i] - delta_[i - 1]));
    return jump;
}

double numeric_time_delay(const PhaseShiftCurve& curve, double e)
{
    if (!(e >= curve.e_min() && e <= curve.e_max())) {
        throw Error(ErrorCode::OutOfSpan, "energy " + format_roundtrip(e) + " outside the phase-shift curve");
    }
    const double k = std::clamp(std::sqrt(e), curve.k_min(), curve.k_max());
    // q = 2 d(delta)/dE with dE/dk = 2k.
    return curve.ddelta_dk(k) / k;
}

LevinsonResult levinson_check(const SquareWell& well, const LevinsonOptions& options)
{
    CurveOptions co;
    co.k_min = options.k_min_factor / well.radius();
    co.k_max = std::max(options.k_max_factor * std::sqrt(well.depth()), 100.0 / well.radius());
    const auto curve = PhaseShiftCurve::build(well, co);

    LevinsonResult out;
    out.phase_at_threshold = curve.delta().front();
    out.bound_states = bound_state_count(well);
    const double residual = std::abs(out.phase_at_threshold - kPi * out.bound_states);
    out.check = {residual, options.tolerance, residual < options.tolerance,
                 "|delta(0+) - pi n_B| < tol: " + format_roundtrip(residual) + " < " + format_roundtrip(options.tolerance)};
    return out;
}

ScanResult resonance_scan(const SquareWell& well, double e_max, const ScanOptions& options)
{
    if (!(e_max > options.e_threshold) || !std::isfinite(e_max)) {
        throw Error(ErrorCode::InvalidArgument, "resonance scan needs e_max above the threshold energy");
    }
    CurveOptions co = options.curve;
    co.k_min = std::sqrt(options.e_threshold);
    co.k_max = std::max({1e3 * std::sqrt(well.depth()), 100.0 / well.radius(), 2.0 * std::sqrt(e_max)});

    ScanResult out;
    out.curve = PhaseShiftCurve::build(well, co);
    const auto& curve = out.curve;
    const double e_lo = curve.e_min();
    auto delay = [&](double e) { return numeric_time_delay(curve, std::clamp(e, curve.e_min(), curve.e_max())); };

    std::vector<double> knots;
    for (double k : curve.k()) {
        const double e = k * k;
        if (e > e_lo && e < e_max) knots.push_back(e);
    }
    out.integral = integrate_adaptive(delay, e_lo, e_max, options.quadrature, knots).value;
    out.count = out.integral / kTwoPi;

    // Candidate maxima on the knot grid, each refined and fitted.
    std::vector<double> grid{e_lo};
    grid.insert(grid.end(), knots.begin(), knots.end());
    grid.push_back(e_max);
    std::vector<double> q(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) q[i] = delay(grid[i]);

    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (!(q[i] > 0.0 && q[i] > q[i - 1] && q[i] >= q[i + 1])) continue;
        const auto peak = golden_section_maximize(delay, grid[i - 1], grid[i + 1], 1e-14 * grid[i + 1]);
        const double half = 0.5 * peak.value;
        auto below_half = [&](double e) { return delay(e) - half; };

        std::size_t l = i;
        while (l > 0 && q[l] > half) --l;
        std::size_t r = i;
        while (r + 1 < grid.size() && q[r] > half) ++r;
        if (q[l] > half || q[r] > half) continue;  // no half-maximum crossing inside the window
        const double left = bisect_root(below_half, grid[l], std::min(peak.location, grid[l + 1]));
        const double right = bisect_root(below_half, std::max(peak.location, grid[r - 1]), grid[r]);
        const double gamma = right - left;
        if (!(gamma > 0.0) || gamma >= peak.location) continue;
        const double lorentz_ratio = peak.value * gamma / 4.0;
        if (lorentz_ratio < 0.5 || lorentz_ratio > 2.0) continue;
        out.resonances.push_back({Resonance(peak.location, gamma), peak.value});
    }
    return out;
}

void write_phase_table(std::ostream& out, const PhaseShiftCurve& curve)
{
    out << "k,value\n";
    for (std::size_t i = 0; i < curve.k().size(); ++i) {
        out << format_roundtrip(curve.k()[i]) << ',' << format_roundtrip(curve.delta()[i]) << '\n';
    }
}

void write_delay_table(std::ostream& out, const PhaseShiftCurve& curve, double e_lo, double e_hi, int points)
{
    if (points < 2 || !(e_lo < e_hi)) throw Error(ErrorCode::InvalidArgument, "delay table needs e_lo < e_hi and 2+ points");
    if (e_lo < curve.e_min() || e_hi > curve.e_max()) {
        throw Error(ErrorCode::OutOfSpan, "delay table range outside the phase-shift curve");
    }
    out << "E,value\n";
    for (int i = 0; i < points; ++i) {
        const double e = e_lo + (e_hi - e_lo) * i / (points - 1);
        out << format_roundtrip(e) << ',' << format_roundtrip(numeric_time_delay(curve, e)) << '\n';
    }
}

}  // namespace tdelay
