#include <cmath>

#include "angular.hpp"
#include "mdens/geometry.hpp"

namespace mdens {

namespace {

// Angular interval of circle i lying in the open disk j, or nothing.
bool covered_interval(const Disk& di, const Disk& dj, detail::AngularPiece& out) {
    const double dx = dj.center.x() - di.center.x();
    const double dy = dj.center.y() - di.center.y();
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d == 0.0) {
        if (dj.radius > di.radius) {
            out = {0.0, kTwoPi};
            return true;
        }
        return false;
    }
    const double kappa = (di.radius * di.radius + d * d - dj.radius * dj.radius) / (2.0 * di.radius * d);
    if (kappa >= 1.0) return false;
    if (kappa <= -1.0) {
        out = {0.0, kTwoPi};
        return true;
    }
    const double phi = std::atan2(dy, dx);
    const double half = std::acos(kappa);
    out = {phi - half, phi + half};
    return true;
}

bool same_disk(const Disk& a, const Disk& b) {
    return a.center == b.center && a.radius == b.radius;
}

}  // namespace

std::vector<Arc> boundary_arcs(std::span<const Disk> disks) {
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < disks.size(); ++i) {
        const Disk& di = disks[i];
        bool duplicate = false;
        std::vector<detail::AngularPiece> covered;
        for (std::size_t j = 0; j < disks.size() && !duplicate; ++j) {
            if (j == i) continue;
            if (same_disk(di, disks[j])) {
                // Keep one copy of coincident circles.
                duplicate = j < i;
                continue;
            }
            detail::AngularPiece iv{};
            if (covered_interval(di, disks[j], iv)) covered.push_back(iv);
        }
        if (duplicate) continue;

        const auto merged = detail::merge_on_turn(covered);
        if (merged.empty()) {
            arcs.push_back(Arc{di.center, di.radius, 0.0, kTwoPi});
            continue;
        }
        if (merged.size() == 1 && merged[0].lo <= 0.0 && merged[0].hi >= kTwoPi) continue;

        for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
            if (merged[k + 1].lo > merged[k].hi) {
                arcs.push_back(Arc{di.center, di.radius, merged[k].hi, merged[k + 1].lo});
            }
        }
        // Gap across the 0 / 2 pi seam, kept as a single arc.
        const double seam_lo = merged.back().hi;
        const double seam_hi = merged.front().lo + kTwoPi;
        if (seam_hi > seam_lo) arcs.push_back(Arc{di.center, di.radius, seam_lo, seam_hi});
    }
    return arcs;
}

}  // namespace mdens
