#pragma once

// Single-channel scattering from an attractive square well, in units
// 2m = hbar = 1 (E = k^2, v = 2k, delay q = 2 d(delta)/dE).
//
// Phase shifts follow the convention delta(k -> infinity) = 0; Levinson's
// theorem then reads delta_l(0+) = pi * n_B. Only l = 0 and l = 1 are
// supported, which is enough to see both bound states and a centrifugal
// shape resonance.

#include "tdelay/resonance.hpp"
#include "tdelay/spline.hpp"
#include "tdelay/stability_index.hpp"

#include <iosfwd>
#include <vector>

namespace tdelay {

class SquareWell
{
  public:
    /// V(r) = -depth for r < radius. Throws Error(InvalidArgument) unless
    /// depth and radius are positive and finite and ell is 0 or 1.
    SquareWell(double depth, double radius, int ell);

    double depth() const noexcept { return depth_; }
    double radius() const noexcept { return radius_; }
    int ell() const noexcept { return ell_; }

  private:
    double depth_;
    double radius_;
    int ell_;
};

/// Phase shift reduced to (-pi/2, pi/2], from matching logarithmic
/// derivatives at r = R. Pole-free: every tangent is replaced by atan2.
double phase_shift_principal(const SquareWell& well, double k);

/// Phase shift from the variable-phase equation
///   d(delta)/dr = (V0/k) [ jhat_l(kr) cos(delta) - nhat_l(kr) sin(delta) ]^2
/// integrated over [0, R] with an adaptive Dormand-Prince stepper. Continuous
/// in k by construction; used as an independent check on the matching route.
double phase_shift_variable_phase(const SquareWell& well, double k, double tolerance = 1e-10);

/// Phase shift on the continuous branch with delta(infinity) = 0. For l = 0
/// the branch is the winding number of K R; for l = 1 it comes from counting
/// the nodes of the interior solution against those of the free one.
double phase_shift(const SquareWell& well, double k);

/// Binding energies (positive numbers B, bound state at E = -B), found by a
/// sign-change scan of the matching condition followed by bisection.
std::vector<double> bound_state_energies(const SquareWell& well);

int bound_state_count(const SquareWell& well);

struct CurveOptions
{
    double k_min = 1e-4;
    double k_max = 1e3;
    int base_points = 1500;
    double max_step = 0.02;     // refine until |delta_{i+1} - delta_i| <= max_step
    double max_k_step = 0.05;   // and until (k_{i+1} - k_i) R <= max_k_step
    int max_refine_depth = 40;
    int check_stride = 4;       // winding-count branch check every n base points
};

/// Branch-tracked samples (k, delta(k)) on an adaptive grid.
///
/// Principal values are unwrapped downward from k_max, where the branch
/// nearest zero is taken. Every check_stride-th base point is compared with
/// phase_shift; a branch mismatch (a whole pi step hidden between samples)
/// throws Error(RefinementFailure).
class PhaseShiftCurve
{
  public:
    static PhaseShiftCurve build(const SquareWell& well, const CurveOptions& options = {});

    const std::vector<double>& k() const noexcept { return k_; }
    const std::vector<double>& delta() const noexcept { return delta_; }

    double k_min() const { return k_.front(); }
    double k_max() const { return k_.back(); }
    double e_min() const { return k_.front() * k_.front(); }
    double e_max() const { return k_.back() * k_.back(); }

    /// Spline value and slope; throw Error(OutOfSpan) outside [k_min, k_max].
    double delta_at(double k) const;
    double ddelta_dk(double k) const;

    /// Largest |delta_{i+1} - delta_i| over the grid.
    double max_jump() const;

  private:
    std::vector<double> k_;
    std::vector<double> delta_;
    CubicSpline spline_;
};

/// 2 d(delta)/dE from the curve's spline, at energy e = k^2.
/// Throws Error(OutOfSpan) when e is outside the curve.
double numeric_time_delay(const PhaseShiftCurve& curve, double e);

struct LevinsonOptions
{
    double k_min_factor = 1e-4;  // k_min = factor / R
    double k_max_factor = 1e3;   // k_max = factor * sqrt(V0), at least 100 / R
    double tolerance = 0.05;
};

struct LevinsonResult
{
    InequalityCheck check;  // lhs = |delta(0+) - pi n_B|, rhs = tolerance
    double phase_at_threshold = 0.0;
    int bound_states = 0;
};

LevinsonResult levinson_check(const SquareWell& well, const LevinsonOptions& options = {});

struct FittedResonance
{
    Resonance resonance;
    double peak_delay = 0.0;  // numeric delay at E0
};

struct ScanOptions
{
    double e_threshold = 1e-8;  // lower integration limit
    QuadratureOptions quadrature{1e-8, 1e-12, 1'000'000};
    CurveOptions curve{};
};

struct ScanResult
{
    double count = 0.0;     // integral / (2 pi)
    double integral = 0.0;  // integral of the numeric delay over [e_threshold, e_max]
    std::vector<FittedResonance> resonances;
    PhaseShiftCurve curve;
};

/// Integrates the numeric delay over (0, e_max] and extracts resonances as
/// delay maxima with half-maximum width fits. A maximum is kept when its
/// width is below its position and its peak is within a factor two of the
/// Lorentzian value 4 / Gamma.
ScanResult resonance_scan(const SquareWell& well, double e_max, const ScanOptions& options = {});

/// CSV tables: header "k,value" (phase) or "E,value" (delay).
void write_phase_table(std::ostream& out, const PhaseShiftCurve& curve);
void write_delay_table(std::ostream& out, const PhaseShiftCurve& curve, double e_lo, double e_hi, int points);

}  // namespace tdelay
