#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mdens/geometry.hpp"

// =============================================================================
// Row distance kernels: minimum distance from a row of grid midpoints to a
// batch of grains. Scalar reference plus an AVX2 variant selected at run time.
// Both variants evaluate the same operation sequence (no FMA contraction), so
// their outputs are bitwise identical.
// =============================================================================

namespace mdens::kernels {

// Structure-of-arrays layout of a grain list. Point grains are stored as
// zero-length segments. Every bounded grain carries its bounding box so rows
// can skip grains farther than the cutoff.
struct GrainBatch {
    // segments and points: a + t (b - a), t in [0, 1]
    std::vector<double> seg_ax, seg_ay, seg_dx, seg_dy, seg_inv_len2;
    // lines: |nx x + ny y - p|
    std::vector<double> line_nx, line_ny, line_p;
    // circles |rho - R| and disks max(rho - R, 0)
    std::vector<double> ring_cx, ring_cy, ring_r;
    std::vector<double> disk_cx, disk_cy, disk_r;
    // arcs: mid-direction (mx, my), cos of the half opening, endpoints
    std::vector<double> arc_cx, arc_cy, arc_r, arc_mx, arc_my, arc_cos_half;
    std::vector<double> arc_e0x, arc_e0y, arc_e1x, arc_e1y;

    // Bounding boxes, one per bounded grain, in the order segments, rings,
    // disks, arcs.
    std::vector<double> box_xlo, box_xhi, box_ylo, box_yhi;

    std::size_t segment_count() const { return seg_ax.size(); }
    std::size_t line_count() const { return line_p.size(); }
    std::size_t ring_count() const { return ring_r.size(); }
    std::size_t disk_count() const { return disk_r.size(); }
    std::size_t arc_count() const { return arc_r.size(); }
    bool empty() const {
        return segment_count() + line_count() + ring_count() + disk_count() + arc_count() == 0;
    }
};

GrainBatch make_batch(std::span<const Grain> grains);

// Points (x0 + i hx, y) for i in [0, n).
struct RowQuery {
    double y = 0.0;
    double x0 = 0.0;
    double hx = 1.0;
    std::size_t n = 0;
    // Grains whose bounding box is farther than this from the row are skipped;
    // outputs greater than cutoff are only known to exceed it.
    double cutoff = 0.0;
};

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// Whether the running CPU and this build can execute `isa`.
bool isa_available(Isa isa);

// Variant used by row_min_distance: AVX2 when available unless the
// MDENS_SIMD environment variable is set to "scalar".
Isa active_isa();

// out[i] = min(+inf, min over grains of distance); out must hold q.n values.
void row_min_distance(const GrainBatch& batch, const RowQuery& q, double* out);
void row_min_distance(Isa isa, const GrainBatch& batch, const RowQuery& q, double* out);

void row_min_distance_scalar(const GrainBatch& batch, const RowQuery& q, double* out);
void row_min_distance_avx2(const GrainBatch& batch, const RowQuery& q, double* out);

}  // namespace mdens::kernels
