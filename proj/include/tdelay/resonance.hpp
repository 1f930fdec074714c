#pragma once

// Breit-Wigner time-delay functions and resonance counting.
//
// Energies are in MeV. Delays are returned in units of hbar (hbar = 1), so a
// delay value q means q * hbar / MeV; multiply by PhysicalConstants::hbar_mev_s
// to obtain seconds. The single exception is sojourn_time, which works in the
// natural units 2m = hbar = 1 of the scattering testbed.

#include "tdelay/quadrature.hpp"

#include <vector>

namespace tdelay {

/// A quasistationary state at position e0 with full width gamma.
class Resonance
{
  public:
    /// Throws Error(InvalidArgument) unless gamma > 0 and both values are finite.
    Resonance(double e0, double gamma);

    double e0() const noexcept { return e0_; }
    double gamma() const noexcept { return gamma_; }

    friend bool operator==(const Resonance&, const Resonance&) = default;

  private:
    double e0_;
    double gamma_;
};

/// A sum of Lorentzian delays observed over a finite energy window.
struct DelayProfile
{
    std::vector<Resonance> resonances;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double background_phase = 0.0;

    /// Throws Error(NonFiniteWindow) for infinite bounds and
    /// Error(InvalidArgument) unless window_lo < window_hi.
    void validate() const;
};

/// Resonant phase shift phi - arctan((Gamma/2)/(E - E0)) on the continuous
/// branch: it rises from phi to phi + pi across the resonance and equals
/// phi + pi/2 at E = E0.
double bw_phase_shift(double e, const Resonance& r, double background_phase = 0.0);

/// Lorentzian delay Gamma / ((E - E0)^2 + (Gamma/2)^2), in units of hbar.
double bw_time_delay(double e, const Resonance& r);

/// Exact energy derivative of bw_time_delay.
double bw_delay_derivative(double e, const Resonance& r);

// Profile-level sums. The phase adds the background phase once.
double phase_shift(const DelayProfile& p, double e);
double time_delay(const DelayProfile& p, double e);
double delay_derivative(const DelayProfile& p, double e);

struct MaxSlope
{
    double location = 0.0;
    double value = 0.0;
};

/// Closed form: the slope dq/dE peaks at E0 - Gamma/(2 sqrt 3) with value
/// 3 sqrt(3) / Gamma^2.
MaxSlope delay_profile_max_slope(const Resonance& r);

/// Same maximum found by golden-section search on bw_delay_derivative over
/// [E0 - Gamma, E0], where the slope is unimodal.
MaxSlope delay_profile_max_slope_numeric(const Resonance& r, double rel_tol = 1e-12);

enum class IntegrationMethod
{
    Quadrature,
    Analytic,
};

/// Integral of the profile delay over its window, in units of hbar.
///
/// The quadrature route seeds the adaptive partition with every resonance
/// position inside the window. The analytic route sums the closed-form
/// antiderivative 2 arctan(2 (E - E0) / Gamma).
QuadratureResult integrate_time_delay(const DelayProfile& p,
                                      IntegrationMethod method = IntegrationMethod::Quadrature,
                                      const QuadratureOptions& options = {});

/// Number of resonances seen by the window: the delay integral divided by
/// 2 pi, so that one isolated resonance counts as 1.
double count_resonances(const DelayProfile& p,
                        IntegrationMethod method = IntegrationMethod::Quadrature,
                        const QuadratureOptions& options = {});

/// Mean time spent inside a sphere of radius a by a particle of energy e,
/// in units 2m = hbar = 1 (k = sqrt(e), v = 2k):
///   T = (2/v) [ d(delta)/dk + a - sin(2(ka + delta)) / (2k) ].
/// Throws Error(ZeroEnergy) for e == 0 and Error(InvalidArgument) for e < 0
/// or a <= 0.
double sojourn_time(double e, double a, double delta, double ddelta_dk);

}  // namespace tdelay
