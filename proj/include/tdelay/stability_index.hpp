#pragma once

// Stability index of an unstable particle, by two routes:
//
//  * the empirical relation M T / hbar = 2^n / n, integerized as the n whose
//    2^n / n is closest to the ratio in log distance;
//  * the time-delay bound n0 >= log2(3 sqrt(3) E* / Gamma), integerized as the
//    first integer strictly greater than the bound.
//
// All 2^n quantities are handled in log space or via ldexp, so nothing
// overflows up to n = 400.

#include "tdelay/catalog.hpp"
#include "tdelay/constants.hpp"
#include "tdelay/resonance.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace tdelay {

inline constexpr int kMaxIndex = 400;

struct InequalityCheck
{
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    std::string context;
};

enum class LogBase
{
    Natural,
    Binary,
};

/// Argmin over n in [1, 400] of |log(2^n / n) - log(ratio)|, ties to the
/// smaller n. Throws Error(RatioOutOfRange) outside [2, 2^400 / 400].
int index_from_ratio(double ratio, LogBase base = LogBase::Natural);

/// Same, taking log(ratio) (natural log) directly.
int index_from_log_ratio(double log_ratio, LogBase base = LogBase::Natural);

/// Empirical index for a particle of given mass and width: ratio = M / Gamma.
int index_from_eq1(double mass_mev, double width_mev);

/// Real-valued bound log2(slope_factor * E* / Gamma).
double index_bound(double estar_mev, double width_mev, const PhysicalConstants& c = {});

/// First integer strictly greater than index_bound, never below 1.
int index_lower_bound(double estar_mev, double width_mev, const PhysicalConstants& c = {});

struct BracketCheck
{
    InequalityCheck inequality;  // E* tau0 / hbar  >=  (2^n0 / n0) [1 - 3 sqrt(3) E* / (2^n0 Gamma)]
    double bracket = 0.0;        // the factor in square brackets
    bool bracket_positive = false;
};

/// Evaluates the per-resonance inequality at index n0 with tau0 = hbar / Gamma,
/// so that lhs = E* / Gamma (dimensionless).
BracketCheck check_bracket_inequality(double estar_mev, const Resonance& r, int n0, const PhysicalConstants& c = {});

struct SeriesBound
{
    double closed_form = 0.0;            // 2^n0 / (n0 + 3 sqrt 3)
    std::optional<double> partial_sum;   // (2^n0/n0) sum_k (-3 sqrt 3 / n0)^k, when it converges
    int terms = 0;
    bool diverges = false;               // geometric ratio 3 sqrt 3 / n0 >= 1
};

/// Throws Error(InvalidArgument) for n0 < 1.
SeriesBound series_lower_bound(int n0, const PhysicalConstants& c = {});

struct PartitionCheck
{
    InequalityCheck inequality;
    int resonances_covered = 0;
    double riemann_sum = 0.0;  // sum_j q(E_j) dE_j, units of hbar
    double bin_width = 0.0;
    double max_slope = 0.0;     // M, units of hbar / MeV^2
    double covered_lo = 0.0;
    double covered_hi = 0.0;
};

/// Riemann-sum bound over n consecutive bins of the 2^n-bin partition of
/// [0, E*], starting at start_bin, sampled at bin midpoints:
///   | 2 pi n_R - sum_j q(E_j) dE |  <=  M E* dE,
/// with n_R the resonances whose E0 lies in the covered span and M the largest
/// single-resonance peak slope. Throws Error(BinCountOverflow) for n > 62 and
/// Error(InvalidArgument) for n < 1 or a start_bin outside [0, 2^n - n].
PartitionCheck check_partition_inequality(double estar_mev, const DelayProfile& p, int n, std::uint64_t start_bin);

struct IndexReport
{
    std::string name;
    double ratio = 0.0;  // M T / hbar
    int n_eq1 = 0;
    int n0_eq19 = 0;
    int agrees_within = 0;
};

/// Both indices for one record. The ratio is mass / width for width records
/// and mass * lifetime / hbar for lifetime records; E* is the mass.
IndexReport build_index_report(const ParticleRecord& rec, const PhysicalConstants& c = {});

}  // namespace tdelay
