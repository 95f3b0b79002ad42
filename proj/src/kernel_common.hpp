#pragma once

// Per-point formulas and row culling shared by every row kernel variant. The
// SIMD variants reproduce these operation sequences lane by lane and fall
// back to them for row tails.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "mdens/kernels.hpp"

namespace mdens::kernels::detail {

struct IndexRange {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

// Indices of row points that can lie within q.cutoff of the box. Widened by
// one index on each side so rounding never drops a qualifying point.
inline bool row_range(double xlo, double xhi, double ylo, double yhi, const RowQuery& q,
                      IndexRange& out) {
    if (q.y < ylo - q.cutoff || q.y > yhi + q.cutoff || q.n == 0) return false;
    const double first = std::floor((xlo - q.cutoff - q.x0) / q.hx) - 1.0;
    const double last = std::floor((xhi + q.cutoff - q.x0) / q.hx) + 2.0;
    const double n = static_cast<double>(q.n);
    const double lo = std::clamp(first, 0.0, n);
    const double hi = std::clamp(last, 0.0, n);
    if (!(lo < hi)) return false;
    out.lo = static_cast<std::size_t>(lo);
    out.hi = static_cast<std::size_t>(hi);
    return true;
}

inline double point_x(const RowQuery& q, std::size_t i) {
    return q.x0 + static_cast<double>(i) * q.hx;
}

inline double vmax(double a, double b) { return a > b ? a : b; }
inline double vmin(double a, double b) { return a < b ? a : b; }

inline double segment_distance(const GrainBatch& b, std::size_t k, double px, double py) {
    const double rx = px - b.seg_ax[k];
    const double ry = py - b.seg_ay[k];
    double t = (rx * b.seg_dx[k] + ry * b.seg_dy[k]) * b.seg_inv_len2[k];
    t = vmin(vmax(t, 0.0), 1.0);
    const double ex = rx - t * b.seg_dx[k];
    const double ey = ry - t * b.seg_dy[k];
    return std::sqrt(ex * ex + ey * ey);
}

inline double line_distance(const GrainBatch& b, std::size_t k, double px, double py) {
    return std::fabs(b.line_nx[k] * px + b.line_ny[k] * py - b.line_p[k]);
}

inline double ring_distance(const GrainBatch& b, std::size_t k, double px, double py) {
    const double ux = px - b.ring_cx[k];
    const double uy = py - b.ring_cy[k];
    return std::fabs(std::sqrt(ux * ux + uy * uy) - b.ring_r[k]);
}

inline double disk_distance(const GrainBatch& b, std::size_t k, double px, double py) {
    const double ux = px - b.disk_cx[k];
    const double uy = py - b.disk_cy[k];
    return vmax(std::sqrt(ux * ux + uy * uy) - b.disk_r[k], 0.0);
}

inline double arc_distance(const GrainBatch& b, std::size_t k, double px, double py) {
    const double ux = px - b.arc_cx[k];
    const double uy = py - b.arc_cy[k];
    const double rho = std::sqrt(ux * ux + uy * uy);
    const double dot = ux * b.arc_mx[k] + uy * b.arc_my[k];
    const double on = std::fabs(rho - b.arc_r[k]);
    const double ax = px - b.arc_e0x[k];
    const double ay = py - b.arc_e0y[k];
    const double bx = px - b.arc_e1x[k];
    const double by = py - b.arc_e1y[k];
    const double e0 = std::sqrt(ax * ax + ay * ay);
    const double e1 = std::sqrt(bx * bx + by * by);
    const double off = vmin(e0, e1);
    return dot >= rho * b.arc_cos_half[k] ? on : off;
}

// Bounding-box offsets into GrainBatch::box_* for each bounded family.
inline std::size_t ring_box(const GrainBatch& b, std::size_t k) { return b.segment_count() + k; }
inline std::size_t disk_box(const GrainBatch& b, std::size_t k) {
    return b.segment_count() + b.ring_count() + k;
}
inline std::size_t arc_box(const GrainBatch& b, std::size_t k) {
    return b.segment_count() + b.ring_count() + b.disk_count() + k;
}

inline bool box_range(const GrainBatch& b, std::size_t box, const RowQuery& q, IndexRange& r) {
    return row_range(b.box_xlo[box], b.box_xhi[box], b.box_ylo[box], b.box_yhi[box], q, r);
}

}  // namespace mdens::kernels::detail
