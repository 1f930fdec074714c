#pragma once

#include <numbers>

namespace tdelay {

/// Reduced Planck constant in MeV*s (CODATA 2018). Every module that
/// converts between widths and lifetimes reads this value.
inline constexpr double kHbarMeVs = 6.582119569e-22;

/// 3*sqrt(3): ratio between the peak slope of a Lorentzian delay and 1/Gamma^2.
inline constexpr double kThreeSqrt3 = 3.0 * std::numbers::sqrt3;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tunable copies of the physical constants, so that negative controls can
/// perturb them without touching the pinned values above.
struct PhysicalConstants
{
    double hbar_mev_s = kHbarMeVs;
    double slope_factor = kThreeSqrt3;
};

}  // namespace tdelay
