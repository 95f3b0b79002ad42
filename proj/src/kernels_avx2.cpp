#include <limits>

#include "kernel_common.hpp"
#include "mdens/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define MDENS_X86 1
#include <immintrin.h>
#else
#define MDENS_X86 0
#endif

namespace mdens::kernels {

#if MDENS_X86

namespace {

using detail::IndexRange;
using detail::point_x;

constexpr std::size_t kLanes = 4;

#define MDENS_AVX2 __attribute__((target("avx2")))

// Lane-wise mirrors of the scalar helpers: max(a, b) = a > b ? a : b and
// min(a, b) = a < b ? a : b match _mm256_max_pd / _mm256_min_pd exactly.

MDENS_AVX2 inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

MDENS_AVX2 inline __m256d lane_x(const RowQuery& q, std::size_t i) {
    const double base = static_cast<double>(i);
    const __m256d idx = _mm256_setr_pd(base, base + 1.0, base + 2.0, base + 3.0);
    return _mm256_add_pd(_mm256_set1_pd(q.x0), _mm256_mul_pd(idx, _mm256_set1_pd(q.hx)));
}

MDENS_AVX2 inline void fold_min(double* out, std::size_t i, __m256d d) {
    const __m256d cur = _mm256_loadu_pd(out + i);
    _mm256_storeu_pd(out + i, _mm256_min_pd(d, cur));
}

MDENS_AVX2 inline __m256d norm(__m256d ux, __m256d uy) {
    return _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(ux, ux), _mm256_mul_pd(uy, uy)));
}

MDENS_AVX2 void segments(const GrainBatch& b, const RowQuery& q, double* out) {
    IndexRange range;
    const __m256d py = _mm256_set1_pd(q.y);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::size_t k = 0; k < b.segment_count(); ++k) {
        if (!detail::box_range(b, k, q, range)) continue;
        const __m256d ax = _mm256_set1_pd(b.seg_ax[k]);
        const __m256d ay = _mm256_set1_pd(b.seg_ay[k]);
        const __m256d dx = _mm256_set1_pd(b.seg_dx[k]);
        const __m256d dy = _mm256_set1_pd(b.seg_dy[k]);
        const __m256d inv = _mm256_set1_pd(b.seg_inv_len2[k]);
        const __m256d ry = _mm256_sub_pd(py, ay);
        std::size_t i = range.lo;
        for (; i + kLanes <= range.hi; i += kLanes) {
            const __m256d rx = _mm256_sub_pd(lane_x(q, i), ax);
            __m256d t = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(rx, dx), _mm256_mul_pd(ry, dy)), inv);
            t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
            const __m256d ex = _mm256_sub_pd(rx, _mm256_mul_pd(t, dx));
            const __m256d ey = _mm256_sub_pd(ry, _mm256_mul_pd(t, dy));
            fold_min(out, i, norm(ex, ey));
        }
        for (; i < range.hi; ++i) {
            out[i] = detail::vmin(detail::segment_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
}

MDENS_AVX2 void lines(const GrainBatch& b, const RowQuery& q, double* out) {
    for (std::size_t k = 0; k < b.line_count(); ++k) {
        const __m256d nx = _mm256_set1_pd(b.line_nx[k]);
        const __m256d nyy = _mm256_set1_pd(b.line_ny[k] * q.y);
        const __m256d p = _mm256_set1_pd(b.line_p[k]);
        std::size_t i = 0;
        for (; i + kLanes <= q.n; i += kLanes) {
            const __m256d v = _mm256_sub_pd(_mm256_add_pd(_mm256_mul_pd(nx, lane_x(q, i)), nyy), p);
            fold_min(out, i, abs_pd(v));
        }
        for (; i < q.n; ++i) {
            out[i] = detail::vmin(detail::line_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
}

MDENS_AVX2 void rings(const GrainBatch& b, const RowQuery& q, double* out) {
    IndexRange range;
    for (std::size_t k = 0; k < b.ring_count(); ++k) {
        if (!detail::box_range(b, detail::ring_box(b, k), q, range)) continue;
        const __m256d cx = _mm256_set1_pd(b.ring_cx[k]);
        const __m256d uy = _mm256_set1_pd(q.y - b.ring_cy[k]);
        const __m256d rr = _mm256_set1_pd(b.ring_r[k]);
        std::size_t i = range.lo;
        for (; i + kLanes <= range.hi; i += kLanes) {
            const __m256d ux = _mm256_sub_pd(lane_x(q, i), cx);
            fold_min(out, i, abs_pd(_mm256_sub_pd(norm(ux, uy), rr)));
        }
        for (; i < range.hi; ++i) {
            out[i] = detail::vmin(detail::ring_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
}

MDENS_AVX2 void disks(const GrainBatch& b, const RowQuery& q, double* out) {
    IndexRange range;
    const __m256d zero = _mm256_setzero_pd();
    for (std::size_t k = 0; k < b.disk_count(); ++k) {
        if (!detail::box_range(b, detail::disk_box(b, k), q, range)) continue;
        const __m256d cx = _mm256_set1_pd(b.disk_cx[k]);
        const __m256d uy = _mm256_set1_pd(q.y - b.disk_cy[k]);
        const __m256d rr = _mm256_set1_pd(b.disk_r[k]);
        std::size_t i = range.lo;
        for (; i + kLanes <= range.hi; i += kLanes) {
            const __m256d ux = _mm256_sub_pd(lane_x(q, i), cx);
            fold_min(out, i, _mm256_max_pd(_mm256_sub_pd(norm(ux, uy), rr), zero));
        }
        for (; i < range.hi; ++i) {
            out[i] = detail::vmin(detail::disk_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
}

MDENS_AVX2 void arcs(const GrainBatch& b, const RowQuery& q, double* out) {
    IndexRange range;
    for (std::size_t k = 0; k < b.arc_count(); ++k) {
        if (!detail::box_range(b, detail::arc_box(b, k), q, range)) continue;
        const __m256d cx = _mm256_set1_pd(b.arc_cx[k]);
        const __m256d uy = _mm256_set1_pd(q.y - b.arc_cy[k]);
        const __m256d rr = _mm256_set1_pd(b.arc_r[k]);
        const __m256d mx = _mm256_set1_pd(b.arc_mx[k]);
        const __m256d my = _mm256_set1_pd(b.arc_my[k]);
        const __m256d ch = _mm256_set1_pd(b.arc_cos_half[k]);
        const __m256d e0x = _mm256_set1_pd(b.arc_e0x[k]);
        const __m256d e0y = _mm256_set1_pd(q.y - b.arc_e0y[k]);
        const __m256d e1x = _mm256_set1_pd(b.arc_e1x[k]);
        const __m256d e1y = _mm256_set1_pd(q.y - b.arc_e1y[k]);
        std::size_t i = range.lo;
        for (; i + kLanes <= range.hi; i += kLanes) {
            const __m256d px = lane_x(q, i);
            const __m256d ux = _mm256_sub_pd(px, cx);
            const __m256d rho = norm(ux, uy);
            const __m256d dot = _mm256_add_pd(_mm256_mul_pd(ux, mx), _mm256_mul_pd(uy, my));
            const __m256d on = abs_pd(_mm256_sub_pd(rho, rr));
            const __m256d d0 = norm(_mm256_sub_pd(px, e0x), e0y);
            const __m256d d1 = norm(_mm256_sub_pd(px, e1x), e1y);
            const __m256d off = _mm256_min_pd(d0, d1);
            const __m256d inside = _mm256_cmp_pd(dot, _mm256_mul_pd(rho, ch), _CMP_GE_OQ);
            fold_min(out, i, _mm256_blendv_pd(off, on, inside));
        }
        for (; i < range.hi; ++i) {
            out[i] = detail::vmin(detail::arc_distance(b, k, point_x(q, i), q.y), out[i]);
        }
    }
}

}  // namespace

void row_min_distance_avx2(const GrainBatch& b, const RowQuery& q, double* out) {
    std::fill(out, out + q.n, std::numeric_limits<double>::infinity());
    segments(b, q, out);
    lines(b, q, out);
    rings(b, q, out);
    disks(b, q, out);
    arcs(b, q, out);
}

#else

void row_min_distance_avx2(const GrainBatch& b, const RowQuery& q, double* out) {
    row_min_distance_scalar(b, q, out);
}

#endif

}  // namespace mdens::kernels
