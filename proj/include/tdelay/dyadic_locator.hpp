#pragma once

// Dyadic subdivision of [0, E*]: depth n splits the window into 2^n equal,
// half-open cells [i E*/2^n, (i+1) E*/2^n). Cells are addressed by
// (depth, index) and never materialized, so depths of a few hundred are cheap.
//
// "A resonance appears at depth n" is split into two separate criteria:
//  * isolation  - its cell holds no other resonance position;
//  * resolution - the cell width E*/2^n is no larger than its width Gamma.

#include "tdelay/resonance.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <vector>

namespace tdelay {

inline constexpr int kMaxDyadicDepth = 200;

using CellIndex = boost::multiprecision::cpp_int;

class DyadicCell
{
  public:
    /// Throws Error(InvalidArgument) unless estar > 0, depth >= 0 and
    /// 0 <= index < 2^depth.
    DyadicCell(double estar, int depth, CellIndex index);

    int depth() const noexcept { return depth_; }
    const CellIndex& index() const noexcept { return index_; }
    double estar() const noexcept { return estar_; }

    /// E*/2^n, exact in floating point.
    double width() const;
    double lower() const;
    double upper() const;

    DyadicCell left_child() const;
    DyadicCell right_child() const;

    /// The depth-n cell containing energy e in [0, E*). Exact: no rounding is
    /// involved in the assignment, and boundary points go to the right cell.
    static DyadicCell containing(double estar, double e, int depth);

    friend bool operator==(const DyadicCell&, const DyadicCell&) = default;

  private:
    double estar_;
    int depth_;
    CellIndex index_;
};

struct LocationResult
{
    Resonance resonance;
    int isolation_depth = 0;
    int resolution_depth = 0;
};

/// ceil(log2(estar / gamma)), computed exactly from the comparisons
/// estar / 2^n <= gamma. Throws Error(InvalidArgument) unless 0 < gamma <= estar.
int depth_for_width(double estar, double gamma);

/// Isolation and resolution depths for each resonance, in input order.
///
/// Throws Error(ResonanceOutsideWindow) unless every E0 lies in (0, E*) and
/// gamma <= E*, Error(DuplicatePosition) for repeated E0, and
/// Error(DepthBudgetExceeded) when two positions stay in one cell past
/// depth 200.
std::vector<LocationResult> locate(double estar, std::span<const Resonance> resonances);

}  // namespace tdelay
