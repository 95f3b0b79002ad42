#include <limits>

#include "kernel_common.hpp"
#include "mdens/kernels.hpp"

namespace mdens::kernels {

using detail::IndexRange;
using detail::point_x;

void row_min_distance_scalar(const GrainBatch& b, const RowQuery& q, double* out) {
    std::fill(out, out + q.n, std::numeric_limits<double>::infinity());
    IndexRange range;

    for (std::size_t k = 0; k < b.segment_count(); ++k) {
        if (!detail::box_range(b, k, q, range)) continue;
        for (std::size_t i = range.lo; i < range.hi; ++i) {
            out[i] = detail::vmin(detail::segment_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
    for (std::size_t k = 0; k < b.line_count(); ++k) {
        for (std::size_t i = 0; i < q.n; ++i) {
            out[i] = detail::vmin(detail::line_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
    for (std::size_t k = 0; k < b.ring_count(); ++k) {
        if (!detail::box_range(b, detail::ring_box(b, k), q, range)) continue;
        for (std::size_t i = range.lo; i < range.hi; ++i) {
            out[i] = detail::vmin(detail::ring_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
    for (std::size_t k = 0; k < b.disk_count(); ++k) {
        if (!detail::box_range(b, detail::disk_box(b, k), q, range)) continue;
        for (std::size_t i = range.lo; i < range.hi; ++i) {
            out[i] = detail::vmin(detail::disk_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
    for (std::size_t k = 0; k < b.arc_count(); ++k) {
        if (!detail::box_range(b, detail::arc_box(b, k), q, range)) continue;
        for (std::size_t i = range.lo; i < range.hi; ++i) {
            out[i] = detail::vmin(detail::arc_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
}

}  // namespace mdens::kernels
