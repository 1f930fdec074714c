#include "tdelay/dyadic_locator.hpp"

#include "tdelay/error.hpp"
#include "tdelay/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>

namespace tdelay {

namespace {

// x = mantissa * 2^exponent with an integer mantissa (x > 0, finite).
struct Binary
{
    std::int64_t mantissa;
    int exponent;
};

Binary decompose(double x)
{
    int e = 0;
    const double f = std::frexp(x, &e);
    return {static_cast<std::int64_t>(std::ldexp(f, 53)), e - 53};
}

// floor(e * 2^depth / estar), exactly.
CellIndex exact_cell_index(double estar, double e, int depth)
{
    if (e == 0.0) return 0;
    const Binary num = decompose(e);
    const Binary den = decompose(estar);
    CellIndex a = num.mantissa;
    CellIndex b = den.mantissa;
    const int shift = num.exponent + depth - den.exponent;
    if (shift >= 0) {
        a <<= shift;
    } else {
        b <<= -shift;
    }
    return a / b;
}

// First depth at which a and b fall in different cells.
int separation_depth(double estar, double a, double b)
{
    int lo = 0;
    int hi = kMaxDyadicDepth + 1;
    if (exact_cell_index(estar, a, hi) == exact_cell_index(estar, b, hi)) return hi;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (exact_cell_index(estar, a, mid) == exact_cell_index(estar, b, mid)) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo;
}

// i * estar / 2^depth with a single round-to-nearest-even; the product is
// exact in cpp_int and only its top 53 bits survive.
double scaled_bound(double estar, const CellIndex& i, int depth)
{
    if (i == 0) return 0.0;
    const Binary den = decompose(estar);
    CellIndex p = i * den.mantissa;
    int exponent = den.exponent - depth;
    const auto bits = static_cast<int>(boost::multiprecision::msb(p)) + 1;
    if (bits > 53) {
        const int drop = bits - 53;
        const CellIndex rest = p & ((CellIndex(1) << drop) - 1);
        const CellIndex half = CellIndex(1) << (drop - 1);
        p >>= drop;
        exponent += drop;
        if (rest > half || (rest == half && (p & 1) != 0)) p += 1;
    }
    return std::ldexp(static_cast<double>(p.convert_to<std::int64_t>()), exponent);
}

}  // namespace

DyadicCell::DyadicCell(double estar, int depth, CellIndex index) : estar_(estar), depth_(depth), index_(std::move(index))
{
    if (!(estar > 0.0) || !std::isfinite(estar)) throw Error(ErrorCode::InvalidArgument, "E* must be positive and finite");
    if (depth < 0) throw Error(ErrorCode::InvalidArgument, "cell depth must be >= 0");
    if (index_ < 0 || index_ >= (CellIndex(1) << depth)) {
        throw Error(ErrorCode::InvalidArgument, "cell index out of range for depth " + std::to_string(depth));
    }
}

double DyadicCell::width() const { return std::ldexp(estar_, -depth_); }

double DyadicCell::lower() const { return scaled_bound(estar_, index_, depth_); }

double DyadicCell::upper() const { return scaled_bound(estar_, index_ + 1, depth_); }

DyadicCell DyadicCell::left_child() const { return {estar_, depth_ + 1, index_ << 1}; }

DyadicCell DyadicCell::right_child() const { return {estar_, depth_ + 1, (index_ << 1) + 1}; }

DyadicCell DyadicCell::containing(double estar, double e, int depth)
{
    if (!(e >= 0.0 && e < estar)) throw Error(ErrorCode::ResonanceOutsideWindow, "energy outside [0, E*)");
    return {estar, depth, exact_cell_index(estar, e, depth)};
}

int depth_for_width(double estar, double gamma)
{
    if (!(gamma > 0.0) || !(gamma <= estar) || !std::isfinite(estar)) {
        throw Error(ErrorCode::InvalidArgument, "depth_for_width needs 0 < gamma <= E*");
    }
    int n = std::max(0, static_cast<int>(std::ceil(std::log2(estar / gamma))) - 1);
    while (n > 0 && std::ldexp(estar, -(n - 1)) <= gamma) --n;
    while (std::ldexp(estar, -n) > gamma) ++n;
    return n;
}

std::vector<LocationResult> locate(double estar, std::span<const Resonance> resonances)
{
    if (!(estar > 0.0) || !std::isfinite(estar)) throw Error(ErrorCode::InvalidArgument, "E* must be positive and finite");
    std::set<double> positions;
    for (const auto& r : resonances) {
        if (!(r.e0() > 0.0 && r.e0() < estar)) {
            throw Error(ErrorCode::ResonanceOutsideWindow,
                        "resonance at " + format_roundtrip(r.e0()) + " lies outside (0, E*)");
        }
        if (r.gamma() > estar) {
            throw Error(ErrorCode::ResonanceOutsideWindow, "resonance width exceeds E*");
        }
        if (!positions.insert(r.e0()).second) {
            throw Error(ErrorCode::DuplicatePosition, "two resonances at " + format_roundtrip(r.e0()));
        }
    }

    std::vector<LocationResult> out;
    out.reserve(resonances.size());
    for (std::size_t j = 0; j < resonances.size(); ++j) {
        int isolation = 0;
        for (std::size_t k = 0; k < resonances.size(); ++k) {
            if (k == j) continue;
            isolation = std::max(isolation, separation_depth(estar, resonances[j].e0(), resonances[k].e0()));
        }
        if (isolation > kMaxDyadicDepth) {
            throw Error(ErrorCode::DepthBudgetExceeded,
                        "resonance at " + format_roundtrip(resonances[j].e0()) + " not isolated by depth 200");
        }
        out.push_back({resonances[j], isolation, depth_for_width(estar, resonances[j].gamma())});
    }
    return out;
}

}  // namespace tdelay
