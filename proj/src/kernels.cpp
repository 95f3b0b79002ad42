#include "mdens/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <type_traits>

namespace mdens::kernels {

namespace {

void push_box(GrainBatch& b, double xlo, double xhi, double ylo, double yhi) {
    b.box_xlo.push_back(xlo);
    b.box_xhi.push_back(xhi);
    b.box_ylo.push_back(ylo);
    b.box_yhi.push_back(yhi);
}

void push_segment(GrainBatch& b, const Point& a, const Point& e) {
    const double dx = e.x() - a.x();
    const double dy = e.y() - a.y();
    const double len2 = dx * dx + dy * dy;
    b.seg_ax.push_back(a.x());
    b.seg_ay.push_back(a.y());
    b.seg_dx.push_back(dx);
    b.seg_dy.push_back(dy);
    b.seg_inv_len2.push_back(len2 > 0.0 ? 1.0 / len2 : 0.0);
}

}  // namespace

GrainBatch make_batch(std::span<const Grain> grains) {
    GrainBatch b;
    // Boxes are appended family by family, so collect bounded grains in order.
    std::vector<const Grain*> rings, disks, arcs;
    for (const Grain& g : grains) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, PointGrain>) {
                    push_segment(b, v.at, v.at);
                } else if constexpr (std::is_same_v<T, Segment>) {
                    push_segment(b, v.a, v.b);
                } else if constexpr (std::is_same_v<T, Line>) {
                    const auto n = line_normal(v);
                    b.line_nx.push_back(n[0]);
                    b.line_ny.push_back(n[1]);
                    b.line_p.push_back(v.p);
                } else if constexpr (std::is_same_v<T, Circle>) {
                    rings.push_back(&g);
                } else if constexpr (std::is_same_v<T, Disk>) {
                    disks.push_back(&g);
                } else {
                    arcs.push_back(&g);
                }
            },
            g);
    }
    for (std::size_t k = 0; k < b.segment_count(); ++k) {
        const double x1 = b.seg_ax[k] + b.seg_dx[k];
        const double y1 = b.seg_ay[k] + b.seg_dy[k];
        push_box(b, std::min(b.seg_ax[k], x1), std::max(b.seg_ax[k], x1), std::min(b.seg_ay[k], y1),
                 std::max(b.seg_ay[k], y1));
    }
    for (const Grain* g : rings) {
        const auto& c = std::get<Circle>(*g);
        b.ring_cx.push_back(c.center.x());
        b.ring_cy.push_back(c.center.y());
        b.ring_r.push_back(c.radius);
        push_box(b, c.center.x() - c.radius, c.center.x() + c.radius, c.center.y() - c.radius,
                 c.center.y() + c.radius);
    }
    for (const Grain* g : disks) {
        const auto& c = std::get<Disk>(*g);
        b.disk_cx.push_back(c.center.x());
        b.disk_cy.push_back(c.center.y());
        b.disk_r.push_back(c.radius);
        push_box(b, c.center.x() - c.radius, c.center.x() + c.radius, c.center.y() - c.radius,
                 c.center.y() + c.radius);
    }
    for (const Grain* g : arcs) {
        const auto& a = std::get<Arc>(*g);
        const double mid = 0.5 * (a.theta_lo + a.theta_hi);
        const double half = 0.5 * (a.theta_hi - a.theta_lo);
        const double cx = a.center.x();
        const double cy = a.center.y();
        b.arc_cx.push_back(cx);
        b.arc_cy.push_back(cy);
        b.arc_r.push_back(a.radius);
        b.arc_mx.push_back(std::cos(mid));
        b.arc_my.push_back(std::sin(mid));
        b.arc_cos_half.push_back(std::cos(half));
        b.arc_e0x.push_back(cx + a.radius * std::cos(a.theta_lo));
        b.arc_e0y.push_back(cy + a.radius * std::sin(a.theta_lo));
        b.arc_e1x.push_back(cx + a.radius * std::cos(a.theta_hi));
        b.arc_e1y.push_back(cy + a.radius * std::sin(a.theta_hi));
        push_box(b, cx - a.radius, cx + a.radius, cy - a.radius, cy + a.radius);
    }
    return b;
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa chosen = [] {
        if (const char* env = std::getenv("MDENS_SIMD"); env && std::string(env) == "scalar") {
            return Isa::Scalar;
        }
        return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
    }();
    return chosen;
}

void row_min_distance(Isa isa, const GrainBatch& batch, const RowQuery& q, double* out) {
    if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) {
        row_min_distance_avx2(batch, q, out);
    } else {
        row_min_distance_scalar(batch, q, out);
    }
}

void row_min_distance(const GrainBatch& batch, const RowQuery& q, double* out) {
    static const auto fn = active_isa() == Isa::Avx2 ? &row_min_distance_avx2 : &row_min_distance_scalar;
    fn(batch, q, out);
}

}  // namespace mdens::kernels
