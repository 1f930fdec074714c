#include "tdelay/stability_index.hpp"

#include "tdelay/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tdelay {

namespace {

// log(2^n / n) in the requested base.
double log_two_pow_over_n(int n, LogBase base)
{
    if (base == LogBase::Binary) return n - std::log2(static_cast<double>(n));
    return n * std::numbers::ln2 - std::log(static_cast<double>(n));
}

std::string describe(const char* what, double lhs, const char* op, double rhs)
{
    return std::string(what) + ": " + format_roundtrip(lhs) + ' ' + op + ' ' + format_roundtrip(rhs);
}

}  // namespace

int index_from_log_ratio(double log_ratio, LogBase base)
{
    const double lo = log_two_pow_over_n(1, LogBase::Natural);
    const double hi = log_two_pow_over_n(kMaxIndex, LogBase::Natural);
    constexpr double slack = 1e-12;
    if (!std::isfinite(log_ratio) || log_ratio < lo - slack || log_ratio > hi + slack) {
        throw Error(ErrorCode::RatioOutOfRange,
                    "log ratio " + format_roundtrip(log_ratio) + " outside the 2^n/n span for n in [1, 400]");
    }
    const double target = base == LogBase::Binary ? log_ratio / std::numbers::ln2 : log_ratio;
    int best = 1;
    double best_distance = std::abs(log_two_pow_over_n(1, base) - target);
    for (int n = 2; n <= kMaxIndex; ++n) {
        const double d = std::abs(log_two_pow_over_n(n, base) - target);
        if (d < best_distance) {
            best = n;
            best_distance = d;
        }
    }
    return best;
}

int index_from_ratio(double ratio, LogBase base)
{
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw Error(ErrorCode::RatioOutOfRange, "ratio must be positive and finite");
    }
    return index_from_log_ratio(std::log(ratio), base);
}

int index_from_eq1(double mass_mev, double width_mev)
{
    if (!(mass_mev > 0.0) || !(width_mev > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "index_from_eq1 needs mass > 0 and width > 0");
    }
    return index_from_log_ratio(std::log(mass_mev) - std::log(width_mev));
}

double index_bound(double estar_mev, double width_mev, const PhysicalConstants& c)
{
    if (!(estar_mev > 0.0) || !(width_mev > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "index bound needs E* > 0 and width > 0");
    }
    return std::log2(c.slope_factor * estar_mev / width_mev);
}

int index_lower_bound(double estar_mev, double width_mev, const PhysicalConstants& c)
{
    const double b = index_bound(estar_mev, width_mev, c);
    return std::max(1, static_cast<int>(std::floor(b)) + 1);
}

BracketCheck check_bracket_inequality(double estar_mev, const Resonance& r, int n0, const PhysicalConstants& c)
{
    if (!(estar_mev > 0.0) || n0 < 1) {
        throw Error(ErrorCode::InvalidArgument, "bracket inequality needs E* > 0 and n0 >= 1");
    }
    const double tau0 = c.hbar_mev_s / r.gamma();
    const double lhs = estar_mev * tau0 / c.hbar_mev_s;
    const double two_pow = std::ldexp(1.0, n0);
    const double bracket = 1.0 - c.slope_factor * estar_mev / (two_pow * r.gamma());
    const double rhs = two_pow / n0 * bracket;

    BracketCheck out;
    out.bracket = bracket;
    out.bracket_positive = bracket > 0.0;
    out.inequality = {lhs, rhs, lhs >= rhs, describe("E*tau0/hbar >= (2^n0/n0)[1 - 3sqrt3 E*/(2^n0 Gamma)]", lhs, ">=", rhs)};
    return out;
}

SeriesBound series_lower_bound(int n0, const PhysicalConstants& c)
{
    if (n0 < 1) throw Error(ErrorCode::InvalidArgument, "series bound needs n0 >= 1");
    SeriesBound out;
    const double two_pow = std::ldexp(1.0, n0);
    out.closed_form = two_pow / (n0 + c.slope_factor);

    const double x = c.slope_factor / n0;
    if (x >= 1.0) {
        out.diverges = true;
        return out;
    }
    double sum = 0.0;
    double term = 1.0;
    int k = 0;
    for (; k < 100000; ++k) {
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        term *= -x;
    }
    out.terms = k + 1;
    out.partial_sum = two_pow / n0 * sum;
    return out;
}

PartitionCheck check_partition_inequality(double estar_mev, const DelayProfile& p, int n, std::uint64_t start_bin)
{
    if (n > 62) {
        throw Error(ErrorCode::BinCountOverflow, "2^" + std::to_string(n) + " bins exceed the 64-bit address budget");
    }
    if (n < 1 || !(estar_mev > 0.0)) throw Error(ErrorCode::InvalidArgument, "partition check needs n >= 1 and E* > 0");
    const std::uint64_t bins = std::uint64_t{1} << n;
    if (start_bin > bins - static_cast<std::uint64_t>(n)) {
        throw Error(ErrorCode::InvalidArgument, "start_bin must lie in [0, 2^n - n]");
    }

    PartitionCheck out;
    out.bin_width = std::ldexp(estar_mev, -n);
    out.covered_lo = static_cast<double>(start_bin) * out.bin_width;
    out.covered_hi = static_cast<double>(start_bin + static_cast<std::uint64_t>(n)) * out.bin_width;

    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double mid = (static_cast<double>(start_bin + static_cast<std::uint64_t>(j)) + 0.5) * out.bin_width;
        sum += time_delay(p, mid) * out.bin_width;
    }
    out.riemann_sum = sum;

    for (const auto& r : p.resonances) {
        if (r.e0() >= out.covered_lo && r.e0() < out.covered_hi) ++out.resonances_covered;
        out.max_slope = std::max(out.max_slope, kThreeSqrt3 / (r.gamma() * r.gamma()));
    }
    const double lhs = std::abs(kTwoPi * out.resonances_covered - sum);
    const double rhs = out.max_slope * estar_mev * out.bin_width;
    out.inequality = {lhs, rhs, lhs <= rhs, describe("|2pi n_R - sum q dE| <= M E* dE", lhs, "<=", rhs)};
    return out;
}

IndexReport build_index_report(const ParticleRecord& rec, const PhysicalConstants& c)
{
    rec.validate();
    IndexReport out;
    out.name = rec.name;
    double log_ratio = 0.0;
    if (rec.width_mev) {
        log_ratio = std::log(rec.mass_mev) - std::log(*rec.width_mev);
    } else {
        log_ratio = std::log(rec.mass_mev) + std::log(*rec.lifetime_s) - std::log(c.hbar_mev_s);
    }
    out.ratio = rec.width_mev ? rec.mass_mev / *rec.width_mev : std::exp(log_ratio);
    out.n_eq1 = index_from_log_ratio(log_ratio);
    out.n0_eq19 = index_lower_bound(rec.mass_mev, rec.width(c.hbar_mev_s), c);
    out.agrees_within = std::abs(out.n_eq1 - out.n0_eq19);
    return out;
}

}  // namespace tdelay
