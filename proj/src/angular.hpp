#pragma once

// Angular interval helpers for circles and arcs. Angles are shifted into a
// reference turn [lo, lo + 2 pi) and intervals are treated as half-open, so
// consecutive pieces of a partition never share measure.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mdens/geometry.hpp"

namespace mdens::detail {

struct AngularPiece {
    double lo;
    double hi;
};

// phi shifted by a multiple of 2 pi into [lo, lo + 2 pi).
inline double wrap_from(double phi, double lo) {
    double t = std::fmod(phi - lo, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t -= kTwoPi;
    return lo + t;
}

// Splits [lo, hi] at the given breakpoints (any turn) and keeps the pieces
// whose midpoint satisfies `inside`. Adjacent kept pieces are merged.
template <class Pred>
std::vector<AngularPiece> inside_pieces(double lo, double hi, const std::vector<double>& breaks,
                                        Pred&& inside) {
    std::vector<double> cuts{lo};
    for (double b : breaks) {
        const double t = wrap_from(b, lo);
        if (t > lo && t < hi) cuts.push_back(t);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    std::vector<AngularPiece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (!(b > a)) continue;
        if (!inside(0.5 * (a + b))) continue;
        if (!out.empty() && out.back().hi == a) {
            out.back().hi = b;
        } else {
            out.push_back({a, b});
        }
    }
    return out;
}

// Union of intervals on the circle, each given in any turn with length in
// (0, 2 pi], returned as sorted disjoint pieces of [0, 2 pi).
inline std::vector<AngularPiece> merge_on_turn(const std::vector<AngularPiece>& intervals) {
    std::vector<AngularPiece> flat;
    for (const auto& iv : intervals) {
        const double len = iv.hi - iv.lo;
        if (len >= kTwoPi) return {{0.0, kTwoPi}};
        const double a = wrap_from(iv.lo, 0.0);
        const double b = a + len;
        if (b <= kTwoPi) {
            flat.push_back({a, b});
        } else {
            flat.push_back({a, kTwoPi});
            flat.push_back({0.0, b - kTwoPi});
        }
    }
    std::sort(flat.begin(), flat.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    std::vector<AngularPiece> merged;
    for (const auto& iv : flat) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

}  // namespace mdens::detail
