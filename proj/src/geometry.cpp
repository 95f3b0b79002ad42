#include "mdens/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "angular.hpp"
#include "mdens/kernels.hpp"
#include "mdens/parallel.hpp"

namespace mdens {

// =============================================================================
// Points and windows
// =============================================================================

Point point1(double x) { return Point{{x, 0.0}, 1}; }
Point point2(double x, double y) { return Point{{x, y}, 2}; }

double Window::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= side(i);
    return v;
}

Point Window::center() const {
    Point c = lo;
    for (int i = 0; i < dim(); ++i) c.coords[i] = 0.5 * (lo.coords[i] + hi.coords[i]);
    return c;
}

bool Window::contains(const Point& x) const {
    for (int i = 0; i < dim(); ++i) {
        if (x.coords[i] < lo.coords[i] || x.coords[i] > hi.coords[i]) return false;
    }
    return true;
}

bool Window::valid() const {
    if (lo.dim != hi.dim || lo.dim < 1 || lo.dim > kMaxDim) return false;
    for (int i = 0; i < dim(); ++i) {
        if (!std::isfinite(lo.coords[i]) || !std::isfinite(hi.coords[i])) return false;
        if (!(lo.coords[i] < hi.coords[i])) return false;
    }
    return true;
}

Window make_window(const Point& lo, const Point& hi) {
    Window w{lo, hi};
    if (!w.valid()) throw std::invalid_argument("window requires lo < hi componentwise in d = 1 or 2");
    return w;
}

Window dilate_window(const Window& w, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("dilate_window: s must be >= 0");
    Window out = w;
    for (int i = 0; i < w.dim(); ++i) {
        out.lo.coords[i] -= s;
        out.hi.coords[i] += s;
    }
    return out;
}

// =============================================================================
// Grain metadata
// =============================================================================

int hausdorff_dim(const Grain& g) {
    return std::visit(
        [](const auto& v) -> int {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointGrain>) return 0;
            else if constexpr (std::is_same_v<T, Disk>) return 2;
            else return 1;
        },
        g);
}

int ambient_dim(const Grain& g) {
    return std::visit(
        [](const auto& v) -> int {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointGrain>) return v.at.dim;
            else if constexpr (std::is_same_v<T, Segment>) return v.a.dim;
            else if constexpr (std::is_same_v<T, Line>) return 2;
            else return v.center.dim;
        },
        g);
}

double unit_ball_volume(int k) {
    if (k < 0) throw std::invalid_argument("unit_ball_volume: k must be >= 0");
    return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

// =============================================================================
// Distances
// =============================================================================

namespace {

double norm2(double x, double y) { return std::sqrt(x * x + y * y); }

double point_distance(const Point& x, const Point& p) {
    return norm2(x.x() - p.x(), x.y() - p.y());
}

double segment_distance(const Point& x, const Segment& s) {
    const double dx = s.b.x() - s.a.x();
    const double dy = s.b.y() - s.a.y();
    const double rx = x.x() - s.a.x();
    const double ry = x.y() - s.a.y();
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? (rx * dx + ry * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm2(rx - t * dx, ry - t * dy);
}

Point on_circle(const Point& c, double radius, double theta) {
    return point2(c.x() + radius * std::cos(theta), c.y() + radius * std::sin(theta));
}

double arc_distance(const Point& x, const Arc& a) {
    const double ux = x.x() - a.center.x();
    const double uy = x.y() - a.center.y();
    const double rho = norm2(ux, uy);
    const double phi = detail::wrap_from(std::atan2(uy, ux), a.theta_lo);
    if (phi <= a.theta_hi) return std::fabs(rho - a.radius);
    return std::min(point_distance(x, on_circle(a.center, a.radius, a.theta_lo)),
                    point_distance(x, on_circle(a.center, a.radius, a.theta_hi)));
}

void require_dim(const Point& x, const Grain& g) {
    if (x.dim != ambient_dim(g)) {
        throw std::invalid_argument("distance: point dimension " + std::to_string(x.dim) +
                                    " does not match grain dimension " +
                                    std::to_string(ambient_dim(g)));
    }
}

}  // namespace

double distance(const Point& x, const Grain& g) {
    require_dim(x, g);
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointGrain>) {
                return point_distance(x, v.at);
            } else if constexpr (std::is_same_v<T, Segment>) {
                return segment_distance(x, v);
            } else if constexpr (std::is_same_v<T, Line>) {
                const auto n = line_normal(v);
                return std::fabs(x.x() * n[0] + x.y() * n[1] - v.p);
            } else if constexpr (std::is_same_v<T, Circle>) {
                return std::fabs(point_distance(x, v.center) - v.radius);
            } else if constexpr (std::is_same_v<T, Arc>) {
                return arc_distance(x, v);
            } else {
                return std::max(0.0, point_distance(x, v.center) - v.radius);
            }
        },
        g);
}

std::optional<double> distance_to_set(const Point& x, std::span<const Grain> grains) {
    if (grains.empty()) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    for (const Grain& g : grains) best = std::min(best, distance(x, g));
    return best;
}

std::optional<double> distance_to_set(const Point& x, const RealizedSet& s) {
    return distance_to_set(x, std::span<const Grain>(s.grains));
}

bool in_enlargement(const Point& x, std::span<const Grain> grains, double r) {
    const auto d = distance_to_set(x, grains);
    return d.has_value() && *d <= r;
}

bool in_enlargement(const Point& x, const RealizedSet& s, double r) {
    return in_enlargement(x, std::span<const Grain>(s.grains), r);
}

// =============================================================================
// Hausdorff measure of clipped grains
// =============================================================================

namespace {

struct ParamRange {
    double lo;
    double hi;
};

// Liang-Barsky: parameters of a + t d inside the box, intersected with `t`.
std::optional<ParamRange> clip_param(const Point& a, double dx, double dy, const Window& w,
                                     ParamRange t) {
    const double d[2] = {dx, dy};
    for (int i = 0; i < w.dim(); ++i) {
        const double lo = w.lo.coords[i] - a.coords[i];
        const double hi = w.hi.coords[i] - a.coords[i];
        if (d[i] == 0.0) {
            if (lo > 0.0 || hi < 0.0) return std::nullopt;
            continue;
        }
        double t0 = lo / d[i];
        double t1 = hi / d[i];
        if (t0 > t1) std::swap(t0, t1);
        t.lo = std::max(t.lo, t0);
        t.hi = std::min(t.hi, t1);
        if (t.lo > t.hi) return std::nullopt;
    }
    return t;
}

struct Chord {
    Point origin;
    double dx, dy;
};

Chord line_chord(const Line& l) {
    const auto [c, s] = line_normal(l);
    return {point2(l.p * c, l.p * s), -s, c};
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Breakpoint angles where the circle (c, R) crosses the edges of w.
std::vector<double> box_crossings(const Point& c, double radius, const Window& w) {
    std::vector<double> out;
    for (int axis = 0; axis < 2; ++axis) {
        for (double edge : {w.lo.coords[axis], w.hi.coords[axis]}) {
            const double v = (edge - c.coords[axis]) / radius;
            if (v < -1.0 || v > 1.0) continue;
            if (axis == 0) {
                const double t = std::acos(v);
                out.push_back(t);
                out.push_back(-t);
            } else {
                const double t = std::asin(v);
                out.push_back(t);
                out.push_back(kPi - t);
            }
        }
    }
    return out;
}

// Breakpoint angles where circle (c, R) crosses the circle (o, r).
std::vector<double> ball_crossings(const Point& c, double radius, const Point& o, double r) {
    const double dx = o.x() - c.x();
    const double dy = o.y() - c.y();
    const double d = norm2(dx, dy);
    if (d == 0.0) return {};
    const double kappa = (radius * radius + d * d - r * r) / (2.0 * radius * d);
    if (kappa < -1.0 || kappa > 1.0) return {};
    const double phi = std::atan2(dy, dx);
    const double half = std::acos(kappa);
    return {phi - half, phi + half};
}

struct ArcSpan {
    Point center;
    double radius;
    double lo;
    double hi;
};

ArcSpan span_of(const Circle& c) { return {c.center, c.radius, 0.0, kTwoPi}; }
ArcSpan span_of(const Arc& a) { return {a.center, a.radius, a.theta_lo, a.theta_hi}; }

double circle_box_length(const ArcSpan& s, const Window& w) {
    const auto pieces = detail::inside_pieces(s.lo, s.hi, box_crossings(s.center, s.radius, w),
                                              [&](double t) { return w.contains(on_circle(s.center, s.radius, t)); });
    double total = 0.0;
    for (const auto& p : pieces) total += p.hi - p.lo;
    return total * s.radius;
}

double circle_ball_length(const ArcSpan& s, const Point& o, double r) {
    const auto pieces = detail::inside_pieces(
        s.lo, s.hi, ball_crossings(s.center, s.radius, o, r),
        [&](double t) { return point_distance(on_circle(s.center, s.radius, t), o) <= r; });
    double total = 0.0;
    for (const auto& p : pieces) total += p.hi - p.lo;
    return total * s.radius;
}

// Integral of sqrt(R^2 - x^2).
double half_chord_integral(double x, double radius) {
    const double u = std::clamp(x / radius, -1.0, 1.0);
    const double xc = u * radius;
    return 0.5 * (xc * std::sqrt(std::max(0.0, radius * radius - xc * xc)) + radius * radius * std::asin(u));
}

// Area of the centered disk of radius R within {x <= a, y <= b}.
double disk_quadrant_area(double a, double b, double radius) {
    if (a <= -radius || b <= -radius) return 0.0;
    const double top = std::min(a, radius);
    auto G = [&](double x) { return half_chord_integral(x, radius); };
    auto full = [&](double u, double v) { return u < v ? 2.0 * (G(v) - G(u)) : 0.0; };
    auto partial = [&](double u, double v) { return u < v ? b * (v - u) + G(v) - G(u) : 0.0; };
    if (b >= radius) return full(-radius, top);
    const double xb = std::sqrt(radius * radius - b * b);
    const double lo1 = -radius, hi1 = std::min(-xb, top);
    const double lo2 = -xb, hi2 = std::min(xb, top);
    const double lo3 = xb, hi3 = top;
    double area = partial(lo2, hi2);
    if (b >= 0.0) area += full(lo1, hi1) + full(lo3, hi3);
    return area;
}

double disk_box_area(const Disk& d, const Window& w) {
    const double x0 = w.lo.x() - d.center.x(), x1 = w.hi.x() - d.center.x();
    const double y0 = w.lo.y() - d.center.y(), y1 = w.hi.y() - d.center.y();
    const double R = d.radius;
    const double area = disk_quadrant_area(x1, y1, R) - disk_quadrant_area(x0, y1, R) -
                        disk_quadrant_area(x1, y0, R) + disk_quadrant_area(x0, y0, R);
    return std::max(0.0, area);
}

double lens_area(double R, double r, double d) {
    if (d >= R + r) return 0.0;
    if (d <= std::fabs(R - r)) {
        const double m = std::min(R, r);
        return kPi * m * m;
    }
    const double a1 = std::acos(std::clamp((d * d + r * r - R * R) / (2.0 * d * r), -1.0, 1.0));
    const double a2 = std::acos(std::clamp((d * d + R * R - r * r) / (2.0 * d * R), -1.0, 1.0));
    const double k = (-d + r + R) * (d + r - R) * (d - r + R) * (d + r + R);
    return r * r * a1 + R * R * a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

void require_planar(const Window& w, const char* what) {
    if (w.dim() != 2) throw std::invalid_argument(std::string(what) + ": window must be planar");
}

}  // namespace

double clip_measure(const Grain& g, const Window& w) {
    if (ambient_dim(g) != w.dim()) throw std::invalid_argument("clip_measure: dimension mismatch");
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointGrain>) {
                return w.contains(v.at) ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Segment>) {
                const double dx = v.b.x() - v.a.x();
                const double dy = v.b.y() - v.a.y();
                const auto t = clip_param(v.a, dx, dy, w, {0.0, 1.0});
                return t ? (t->hi - t->lo) * norm2(dx, dy) : 0.0;
            } else if constexpr (std::is_same_v<T, Line>) {
                const Chord c = line_chord(v);
                const auto t = clip_param(c.origin, c.dx, c.dy, w, {-kInf, kInf});
                return t ? t->hi - t->lo : 0.0;
            } else if constexpr (std::is_same_v<T, Disk>) {
                return disk_box_area(v, w);
            } else {
                return circle_box_length(span_of(v), w);
            }
        },
        g);
}

double measure_in_ball(const Grain& g, const Point& center, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("measure_in_ball: r must be > 0");
    if (ambient_dim(g) != center.dim) throw std::invalid_argument("measure_in_ball: dimension mismatch");
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointGrain>) {
                return point_distance(v.at, center) <= r ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Segment>) {
                const double dx = v.b.x() - v.a.x();
                const double dy = v.b.y() - v.a.y();
                const double fx = v.a.x() - center.x();
                const double fy = v.a.y() - center.y();
                const double A = dx * dx + dy * dy;
                const double B = fx * dx + fy * dy;
                const double C = fx * fx + fy * fy - r * r;
                const double disc = B * B - A * C;
                if (A == 0.0 || disc <= 0.0) return 0.0;
                const double root = std::sqrt(disc);
                const double s0 = std::max(0.0, (-B - root) / A);
                const double s1 = std::min(1.0, (-B + root) / A);
                return s1 > s0 ? (s1 - s0) * std::sqrt(A) : 0.0;
            } else if constexpr (std::is_same_v<T, Line>) {
                const double dist = distance(center, v);
                return dist < r ? 2.0 * std::sqrt(r * r - dist * dist) : 0.0;
            } else if constexpr (std::is_same_v<T, Disk>) {
                return lens_area(v.radius, r, point_distance(v.center, center));
            } else {
                return circle_ball_length(span_of(v), center, r);
            }
        },
        g);
}

bool intersects(const Grain& g, const Window& w) {
    return std::visit(
        [&](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointGrain>) {
                return w.contains(v.at);
            } else if constexpr (std::is_same_v<T, Segment>) {
                return clip_param(v.a, v.b.x() - v.a.x(), v.b.y() - v.a.y(), w, {0.0, 1.0}).has_value();
            } else if constexpr (std::is_same_v<T, Line>) {
                const Chord c = line_chord(v);
                return clip_param(c.origin, c.dx, c.dy, w, {-kInf, kInf}).has_value();
            } else {
                const double nx = std::clamp(v.center.x(), w.lo.x(), w.hi.x()) - v.center.x();
                const double ny = std::clamp(v.center.y(), w.lo.y(), w.hi.y()) - v.center.y();
                const double nearest = norm2(nx, ny);
                if (nearest > v.radius) return false;
                if constexpr (std::is_same_v<T, Disk>) {
                    return true;
                } else {
                    const double fx = std::max(std::fabs(w.lo.x() - v.center.x()), std::fabs(w.hi.x() - v.center.x()));
                    const double fy = std::max(std::fabs(w.lo.y() - v.center.y()), std::fabs(w.hi.y() - v.center.y()));
                    if (norm2(fx, fy) < v.radius) return false;
                    if constexpr (std::is_same_v<T, Circle>) {
                        return true;
                    } else {
                        return circle_box_length(span_of(v), w) > 0.0 ||
                               w.contains(on_circle(v.center, v.radius, v.theta_lo)) ||
                               w.contains(on_circle(v.center, v.radius, v.theta_hi));
                    }
                }
            }
        },
        g);
}

std::vector<Grain> clip_grain(const Grain& g, const Window& w) {
    std::vector<Grain> out;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointGrain>) {
                if (w.contains(v.at)) out.push_back(v);
            } else if constexpr (std::is_same_v<T, Segment>) {
                const double dx = v.b.x() - v.a.x();
                const double dy = v.b.y() - v.a.y();
                const auto t = clip_param(v.a, dx, dy, w, {0.0, 1.0});
                if (!t || !(t->hi > t->lo)) return;
                Segment piece = v;
                piece.a.coords = {v.a.x() + t->lo * dx, v.a.y() + t->lo * dy};
                piece.b.coords = {v.a.x() + t->hi * dx, v.a.y() + t->hi * dy};
                if (t->lo == 0.0) piece.a = v.a;
                if (t->hi == 1.0) piece.b = v.b;
                out.push_back(piece);
            } else if constexpr (std::is_same_v<T, Line>) {
                require_planar(w, "clip_grain");
                const Chord c = line_chord(v);
                const auto t = clip_param(c.origin, c.dx, c.dy, w, {-kInf, kInf});
                if (!t || !(t->hi > t->lo)) return;
                out.push_back(Segment{point2(c.origin.x() + t->lo * c.dx, c.origin.y() + t->lo * c.dy),
                                      point2(c.origin.x() + t->hi * c.dx, c.origin.y() + t->hi * c.dy)});
            } else if constexpr (std::is_same_v<T, Disk>) {
                throw std::invalid_argument("clip_grain: disks are not supported");
            } else {
                require_planar(w, "clip_grain");
                const ArcSpan s = span_of(v);
                const auto pieces = detail::inside_pieces(
                    s.lo, s.hi, box_crossings(s.center, s.radius, w),
                    [&](double t) { return w.contains(on_circle(s.center, s.radius, t)); });
                if (pieces.size() == 1 && pieces[0].lo == s.lo && pieces[0].hi == s.hi) {
                    out.push_back(v);
                    return;
                }
                for (const auto& p : pieces) out.push_back(Arc{s.center, s.radius, p.lo, p.hi});
            }
        },
        g);
    return out;
}

// =============================================================================
// Enlargement quadrature
// =============================================================================

namespace {

struct Grid {
    std::size_t nx = 1, ny = 1;
    double hx = 1.0, hy = 1.0;
};

Grid make_grid(const Window& a, int resolution) {
    Grid g;
    g.nx = static_cast<std::size_t>(resolution);
    g.hx = a.side(0) / static_cast<double>(resolution);
    if (a.dim() == 2) {
        g.ny = static_cast<std::size_t>(resolution);
        g.hy = a.side(1) / static_cast<double>(resolution);
    }
    return g;
}

}  // namespace

double enlargement_volume(std::span<const Grain> grains, const Window& a, double r, int resolution,
                          unsigned workers) {
    if (!(r > 0.0)) throw std::invalid_argument("enlargement_volume: r must be > 0");
    if (resolution < 8) throw std::invalid_argument("enlargement_volume: resolution must be >= 8");
    if (grains.empty()) return 0.0;
    for (const Grain& g : grains) {
        if (ambient_dim(g) != a.dim()) throw std::invalid_argument("enlargement_volume: dimension mismatch");
    }
    const Grid grid = make_grid(a, resolution);
    const kernels::GrainBatch batch = kernels::make_batch(grains);
    std::vector<std::size_t> row_counts(grid.ny, 0);
    parallel_for(grid.ny, workers, [&](std::size_t begin, std::size_t end) {
        std::vector<double> dist(grid.nx);
        for (std::size_t j = begin; j < end; ++j) {
            kernels::RowQuery q;
            q.y = a.dim() == 2 ? a.lo.y() + (static_cast<double>(j) + 0.5) * grid.hy : 0.0;
            q.x0 = a.lo.x() + 0.5 * grid.hx;
            q.hx = grid.hx;
            q.n = grid.nx;
            q.cutoff = r;
            kernels::row_min_distance(batch, q, dist.data());
            row_counts[j] = static_cast<std::size_t>(
                std::count_if(dist.begin(), dist.end(), [r](double d) { return d <= r; }));
        }
    });
    std::size_t total = 0;
    for (std::size_t c : row_counts) total += c;
    return static_cast<double>(total) * grid.hx * grid.hy;
}

double enlargement_volume(const RealizedSet& s, const Window& a, double r, int resolution,
                          unsigned workers) {
    return enlargement_volume(std::span<const Grain>(s.grains), a, r, resolution, workers);
}

double quadrature_error_bound(std::span<const Grain> grains, const Window& a, double r,
                              int resolution) {
    const Grid grid = make_grid(a, resolution);
    const Window reach = dilate_window(a, r);
    if (a.dim() == 1) {
        // Each grain ⊕ r is an interval with two endpoints.
        double points = 0.0;
        for (const Grain& g : grains) {
            if (intersects(g, reach)) points += 2.0;
        }
        return points * grid.hx;
    }
    const double hmin = std::min(grid.hx, grid.hy);
    const double diag = norm2(reach.side(0), reach.side(1));
    double perimeter = 0.0;
    double components = 0.0;
    for (const Grain& g : grains) {
        if (!intersects(g, reach)) continue;
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, PointGrain>) {
                    perimeter += kTwoPi * r;
                    components += 1.0;
                } else if constexpr (std::is_same_v<T, Segment>) {
                    perimeter += 2.0 * point_distance(v.a, v.b) + kTwoPi * r;
                    components += 1.0;
                } else if constexpr (std::is_same_v<T, Line>) {
                    perimeter += 2.0 * diag;
                    components += 2.0;
                } else if constexpr (std::is_same_v<T, Circle>) {
                    perimeter += kTwoPi * (v.radius + r);
                    components += 1.0;
                    if (v.radius > r) {
                        perimeter += kTwoPi * (v.radius - r);
                        components += 1.0;
                    }
                } else if constexpr (std::is_same_v<T, Arc>) {
                    const double sweep = v.theta_hi - v.theta_lo;
                    perimeter += (v.radius + r) * sweep + std::fabs(v.radius - r) * sweep + kTwoPi * r;
                    components += 1.0;
                } else {
                    perimeter += kTwoPi * (v.radius + r);
                    components += 1.0;
                }
            },
            g);
    }
    return 4.0 * (perimeter / hmin + components) * grid.hx * grid.hy;
}

}  // namespace mdens
