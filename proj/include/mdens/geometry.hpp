#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

// =============================================================================
// Primitive closed sets in R^d (d in {1, 2}), exact distance and Hausdorff
// measure queries, union-of-disks boundaries and enlargement quadrature.
// =============================================================================

namespace mdens {

inline constexpr int kMaxDim = 2;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// A point in R^d. One-dimensional points keep coords[1] == 0 so that the
// planar kernels can be reused verbatim on the line.
struct Point {
    std::array<double, kMaxDim> coords{0.0, 0.0};
    int dim = 2;

    double x() const { return coords[0]; }
    double y() const { return coords[1]; }

    bool operator==(const Point&) const = default;
};

Point point1(double x);
Point point2(double x, double y);

// Axis-aligned closed box [lo, hi].
struct Window {
    Point lo;
    Point hi;

    int dim() const { return lo.dim; }
    double side(int axis) const { return hi.coords[axis] - lo.coords[axis]; }
    double volume() const;
    Point center() const;
    bool contains(const Point& x) const;
    // lo < hi componentwise, same dimension, finite.
    bool valid() const;

    bool operator==(const Window&) const = default;
};

// Throws std::invalid_argument unless lo < hi componentwise.
Window make_window(const Point& lo, const Point& hi);

// ---- grains ---------------------------------------------------------------

struct PointGrain {
    Point at;
};

struct Segment {
    Point a;
    Point b;
};

// {x : x . (cos alpha, sin alpha) = p}, alpha in (0, pi]. Planar only.
struct Line {
    double p = 0.0;
    double alpha = kPi / 2;
};

struct Circle {
    Point center;
    double radius = 1.0;
};

// Counter-clockwise arc from theta_lo to theta_hi, 0 < theta_hi - theta_lo <= 2 pi.
struct Arc {
    Point center;
    double radius = 1.0;
    double theta_lo = 0.0;
    double theta_hi = kTwoPi;
};

struct Disk {
    Point center;
    double radius = 1.0;
};

using Grain = std::variant<PointGrain, Segment, Line, Circle, Arc, Disk>;

int hausdorff_dim(const Grain& g);
int ambient_dim(const Grain& g);

// One realization restricted to the region where it is known to be complete.
struct RealizedSet {
    std::vector<Grain> grains;
    int n = 1;
    Window valid_window;

    bool empty() const { return grains.empty(); }
};

// ---- operations -----------------------------------------------------------

// pi^{k/2} / Gamma(k/2 + 1)
double unit_ball_volume(int k);

// Exact Euclidean distance from x to the grain. Throws std::invalid_argument
// on a dimension mismatch.
double distance(const Point& x, const Grain& g);

// Minimum distance over grains; nullopt for the empty set.
std::optional<double> distance_to_set(const Point& x, std::span<const Grain> grains);
std::optional<double> distance_to_set(const Point& x, const RealizedSet& s);

// Closed enlargement: distance <= r. Always false for the empty set.
bool in_enlargement(const Point& x, std::span<const Grain> grains, double r);
bool in_enlargement(const Point& x, const RealizedSet& s, double r);

// H^n(g ∩ w) with n = hausdorff_dim(g).
double clip_measure(const Grain& g, const Window& w);

// H^n(g ∩ B_r(center)).
double measure_in_ball(const Grain& g, const Point& center, double r);

// True iff g meets the closed box w.
bool intersects(const Grain& g, const Window& w);

// Pieces of g lying in the closed box w (segments, chords, arcs, points).
// Disks are not supported.
std::vector<Grain> clip_grain(const Grain& g, const Window& w);

// Arcs of the circles ∂B_i not strictly inside any other disk.
std::vector<Arc> boundary_arcs(std::span<const Disk> disks);

// Box dilation [lo - s, hi + s].
Window dilate_window(const Window& w, double s);

// Midpoint-rule volume of {x in a : dist(x, grains) <= r} on `resolution`
// cells per axis. The grid tiles `a` exactly, so only cells cut by the
// boundary of the enlargement contribute error; see quadrature_error_bound.
double enlargement_volume(std::span<const Grain> grains, const Window& a, double r,
                          int resolution, unsigned workers = 1);
double enlargement_volume(const RealizedSet& s, const Window& a, double r, int resolution,
                          unsigned workers = 1);

// Upper bound on |enlargement_volume - exact volume|.
//
// A rectifiable curve of length P meets at most 4 (P / h_min + 1) cells of a
// grid with cell sides >= h_min, and the midpoint rule is exact on cells the
// boundary of the enlarged set does not meet. The boundary of a union lies in
// the union of the boundaries, so summing per-grain perimeters of g ⊕ r and
// per-grain component counts k gives
//     |error| <= 4 (sum P_g / h_min + sum k_g) * cell_volume.
// In d = 1 each boundary point costs at most one cell.
double quadrature_error_bound(std::span<const Grain> grains, const Window& a, double r,
                              int resolution);

// Unit normal (cos alpha, sin alpha), exact for the axis directions so that
// lines along box edges clip without rounding loss.
inline std::array<double, 2> line_normal(const Line& l) {
    if (l.alpha == kPi / 2) return {0.0, 1.0};
    if (l.alpha == kPi) return {-1.0, 0.0};
    return {std::cos(l.alpha), std::sin(l.alpha)};
}

// Arc length of an arc.
inline double arc_length(const Arc& a) { return a.radius * (a.theta_hi - a.theta_lo); }

}  // namespace mdens
