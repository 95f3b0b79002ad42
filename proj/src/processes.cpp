#include "mdens/processes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace mdens {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& field, const std::string& constraint, double got) {
    std::ostringstream os;
    os << field << ": " << constraint << " (got " << got << ")";
    throw std::invalid_argument(os.str());
}

void require_positive(double v, const std::string& field) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(field, "must be a finite value > 0", v);
}

// u in [0, 1] with density (1 - k/2) + k u, |k| <= 2, by inverting the CDF.
double affine_unit(double k, double U) {
    const double b = 1.0 - 0.5 * k;
    return 2.0 * U / (b + std::sqrt(b * b + 2.0 * k * U));
}

Point uniform_in(const Window& w, RngStream& rng) {
    Point p = w.lo;
    for (int i = 0; i < w.dim(); ++i) p.coords[i] = rng.uniform(w.lo.coords[i], w.hi.coords[i]);
    return p;
}

// Affine law in x_1 with slope c relative to the box midpoint.
Point affine_in(const Window& w, double c, RngStream& rng) {
    Point p = w.lo;
    const double width = w.side(0);
    p.coords[0] = w.lo.x() + width * affine_unit(c * width, rng.uniform());
    for (int i = 1; i < w.dim(); ++i) p.coords[i] = rng.uniform(w.lo.coords[i], w.hi.coords[i]);
    return p;
}

double overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

double orientation(RngStream& rng) { return kPi * (1.0 - rng.uniform()); }

Segment centered_segment(const Point& c, double length, double alpha) {
    const double hx = 0.5 * length * std::cos(alpha);
    const double hy = 0.5 * length * std::sin(alpha);
    return Segment{point2(c.x() - hx, c.y() - hy), point2(c.x() + hx, c.y() + hy)};
}

void keep_hitting(std::vector<Grain>& grains, const Window& valid) {
    std::erase_if(grains, [&](const Grain& g) { return !intersects(g, valid); });
}

}  // namespace

// =============================================================================
// Laws
// =============================================================================

const Window& DensitySpec::support() const {
    return std::visit([](const auto& v) -> const Window& { return v.box; }, kind);
}

Point DensitySpec::sample(RngStream& rng) const {
    return std::visit(
        overloaded{
            [&](const UniformBox& v) { return uniform_in(v.box, rng); },
            [&](const AffineX& v) { return affine_in(v.box, v.c, rng); },
            [&](const GaussianTruncated& v) {
                for (int attempt = 0; attempt < 1'000'000; ++attempt) {
                    Point p = v.mean;
                    for (int i = 0; i < v.box.dim(); ++i) p.coords[i] += v.sigma * rng.normal();
                    if (v.box.contains(p)) return p;
                }
                throw std::runtime_error("GaussianTruncated: box has negligible probability");
            },
        },
        kind);
}

std::optional<double> DensitySpec::pdf(const Point& x) const {
    return std::visit(
        overloaded{
            [&](const UniformBox& v) -> std::optional<double> {
                return v.box.contains(x) ? 1.0 / v.box.volume() : 0.0;
            },
            [&](const AffineX& v) -> std::optional<double> {
                if (!v.box.contains(x)) return 0.0;
                return (1.0 + v.c * (x.x() - v.box.center().x())) / v.box.volume();
            },
            [&](const GaussianTruncated&) -> std::optional<double> { return std::nullopt; },
        },
        kind);
}

std::optional<double> DensitySpec::mass(const Window& w) const {
    auto cross_fraction = [&](const Window& box) {
        double f = 1.0;
        for (int i = 1; i < box.dim(); ++i) {
            f *= overlap(w.lo.coords[i], w.hi.coords[i], box.lo.coords[i], box.hi.coords[i]) / box.side(i);
        }
        return f;
    };
    return std::visit(
        overloaded{
            [&](const UniformBox& v) -> std::optional<double> {
                return overlap(w.lo.x(), w.hi.x(), v.box.lo.x(), v.box.hi.x()) / v.box.side(0) *
                       cross_fraction(v.box);
            },
            [&](const AffineX& v) -> std::optional<double> {
                const double a = std::max(w.lo.x(), v.box.lo.x());
                const double b = std::min(w.hi.x(), v.box.hi.x());
                if (!(b > a)) return 0.0;
                const double m = v.box.center().x();
                const double integral = (b - a) + 0.5 * v.c * ((b - m) * (b - m) - (a - m) * (a - m));
                return integral / v.box.side(0) * cross_fraction(v.box);
            },
            [&](const GaussianTruncated&) -> std::optional<double> { return std::nullopt; },
        },
        kind);
}

std::int64_t CountLaw::sample(RngStream& rng) const {
    return std::visit(
        overloaded{
            [](const Deterministic& v) { return v.k; },
            [&](const GeometricOnPositives& v) { return 1 + static_cast<std::int64_t>(rng.geometric(v.p)); },
            [&](const OnePlusPoisson& v) { return 1 + static_cast<std::int64_t>(rng.poisson(v.mean)); },
        },
        kind);
}

double CountLaw::mean() const {
    return std::visit(
        overloaded{
            [](const Deterministic& v) { return static_cast<double>(v.k); },
            [](const GeometricOnPositives& v) { return 1.0 / v.p; },
            [](const OnePlusPoisson& v) { return 1.0 + v.mean; },
        },
        kind);
}

double LengthLaw::sample(RngStream& rng) const {
    return std::visit(overloaded{
                          [](const FixedLength& v) { return v.length; },
                          [&](const UniformLength& v) { return rng.uniform(v.lo, v.hi); },
                      },
                      kind);
}

double LengthLaw::mean() const {
    return std::visit(overloaded{
                          [](const FixedLength& v) { return v.length; },
                          [](const UniformLength& v) { return 0.5 * (v.lo + v.hi); },
                      },
                      kind);
}

double LengthLaw::max() const {
    return std::visit(overloaded{
                          [](const FixedLength& v) { return v.length; },
                          [](const UniformLength& v) { return v.hi; },
                      },
                      kind);
}

Grain GrainLaw::sample(RngStream& rng) const {
    return std::visit(
        overloaded{
            [&](const SegmentLaw& v) -> Grain {
                const Point c = v.center.sample(rng);
                const double length = v.length.sample(rng);
                return centered_segment(c, length, orientation(rng));
            },
            [&](const CircleLaw& v) -> Grain { return Circle{v.center.sample(rng), v.radius}; },
        },
        kind);
}

// =============================================================================
// Model metadata and validation
// =============================================================================

int ModelSpec::n() const {
    return std::visit(overloaded{
                          [](const RandomPointModel&) { return 0; },
                          [](const BirthGrowthModel& v) { return v.target == GrowthTarget::Solid ? 2 : 1; },
                          [](const auto&) { return 1; },
                      },
                      kind);
}

int ModelSpec::d() const {
    return std::visit(overloaded{
                          [](const RandomPointModel& v) { return v.pdf.dim(); },
                          [](const auto&) { return 2; },
                      },
                      kind);
}

void validate(const DensitySpec& density, const char* field) {
    const std::string f(field);
    if (!density.support().valid()) {
        throw std::invalid_argument(f + ".box: requires lo < hi componentwise in d = 1 or 2");
    }
    std::visit(overloaded{
                   [](const UniformBox&) {},
                   [&](const AffineX& v) {
                       const double slack = std::fabs(v.c) * 0.5 * v.box.side(0);
                       if (!(slack <= 1.0)) fail(f + ".c", "|c| * half-width must be <= 1", v.c);
                   },
                   [&](const GaussianTruncated& v) {
                       require_positive(v.sigma, f + ".sigma");
                       if (v.mean.dim != v.box.dim()) {
                           throw std::invalid_argument(f + ".mean: dimension must match the box");
                       }
                   },
               },
               density.kind);
}

namespace {

void validate_length(const LengthLaw& law, const std::string& field) {
    std::visit(overloaded{
                   [&](const FixedLength& v) { require_positive(v.length, field + ".length"); },
                   [&](const UniformLength& v) {
                       require_positive(v.lo, field + ".lo");
                       if (!(v.hi > v.lo)) fail(field + ".hi", "must be > lo", v.hi);
                   },
               },
               law.kind);
}

}  // namespace

void validate(const ModelSpec& model) {
    std::visit(
        overloaded{
            [](const RandomPointModel& v) { validate(v.pdf, "density"); },
            [](const GrainUnionModel& v) {
                std::visit(overloaded{
                               [](const Deterministic& c) {
                                   if (c.k < 1) fail("count.k", "must be >= 1", static_cast<double>(c.k));
                               },
                               [](const GeometricOnPositives& c) {
                                   if (!(c.p > 0.0 && c.p < 1.0)) fail("count.p", "must lie in (0, 1)", c.p);
                               },
                               [](const OnePlusPoisson& c) {
                                   if (!(c.mean >= 0.0) || !std::isfinite(c.mean)) {
                                       fail("count.mean", "must be a finite value >= 0", c.mean);
                                   }
                               },
                           },
                           v.count.kind);
                std::visit(overloaded{
                               [](const SegmentLaw& g) {
                                   validate(g.center, "grain.center");
                                   if (g.center.dim() != 2) {
                                       throw std::invalid_argument("grain.center: segment centers must be planar");
                                   }
                                   validate_length(g.length, "grain.length");
                               },
                               [](const CircleLaw& g) {
                                   validate(g.center, "grain.center");
                                   if (g.center.dim() != 2) {
                                       throw std::invalid_argument("grain.center: circle centers must be planar");
                                   }
                                   require_positive(g.radius, "grain.radius");
                               },
                           },
                           v.grain.kind);
            },
            [](const PoissonLineModel& v) { require_positive(v.L, "L"); },
            [](const PoissonSegmentModel& v) {
                require_positive(v.center_intensity, "center_intensity");
                validate_length(v.length, "length");
            },
            [](const BirthGrowthModel& v) {
                std::visit(overloaded{
                               [](const ConstantRate& r) {
                                   if (!(r.a >= 0.0) || !std::isfinite(r.a)) fail("nucleation.a", "must be >= 0", r.a);
                               },
                               [](const AffineRate& r) {
                                   if (!(r.a >= 0.0) || !std::isfinite(r.a)) fail("nucleation.a", "must be >= 0", r.a);
                                   if (!std::isfinite(r.c)) fail("nucleation.c", "must be finite", r.c);
                               },
                           },
                           v.nucleation);
                require_positive(v.G, "G");
                require_positive(v.t, "t");
            },
        },
        model.kind);
}

// =============================================================================
// Samplers
// =============================================================================

std::vector<Line> sample_poisson_lines(double L, const Point& center, double radius, RngStream& rng) {
    const std::uint64_t count = rng.poisson(2.0 * radius * L);
    std::vector<Line> lines;
    lines.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double offset = rng.uniform(-radius, radius);
        const double alpha = orientation(rng);
        const double p = offset + center.x() * std::cos(alpha) + center.y() * std::sin(alpha);
        lines.push_back(Line{p, alpha});
    }
    return lines;
}

RealizedSet birth_growth_from_nuclei(std::span<const Nucleus> nuclei, double G, double t,
                                     GrowthTarget target, const Window& valid) {
    std::vector<Disk> disks;
    for (const Nucleus& nu : nuclei) {
        const double radius = G * (t - nu.time);
        if (nu.time <= t && radius > 0.0) disks.push_back(Disk{nu.at, radius});
    }
    RealizedSet s;
    s.valid_window = valid;
    if (target == GrowthTarget::Solid) {
        s.n = 2;
        s.grains.assign(disks.begin(), disks.end());
    } else {
        s.n = 1;
        for (const Arc& a : boundary_arcs(disks)) {
            if (a.theta_hi - a.theta_lo >= kTwoPi) {
                s.grains.push_back(Circle{a.center, a.radius});
            } else {
                s.grains.push_back(a);
            }
        }
    }
    keep_hitting(s.grains, valid);
    return s;
}

RealizedSet sample_birth_growth(const BirthGrowthModel& model, const Window& w, RngStream& rng) {
    if (w.dim() != 2) throw std::invalid_argument("birth-and-growth sampling requires a planar window");
    const Window valid = dilate_window(w, 1.0);
    const Window gen = dilate_window(w, 1.0 + model.G * model.t);
    std::vector<Nucleus> nuclei;
    std::visit(overloaded{
                   [&](const ConstantRate& r) {
                       const std::uint64_t count = rng.poisson(r.a * model.t * gen.volume());
                       for (std::uint64_t i = 0; i < count; ++i) {
                           const double time = rng.uniform(0.0, model.t);
                           nuclei.push_back({time, uniform_in(gen, rng)});
                       }
                   },
                   [&](const AffineRate& r) {
                       const double lo = 1.0 + r.c * gen.lo.x();
                       const double hi = 1.0 + r.c * gen.hi.x();
                       if (lo < 0.0 || hi < 0.0) {
                           throw std::invalid_argument("nucleation.c: rate a (1 + c x_1) is negative on the sampling box");
                       }
                       const double mid = 1.0 + r.c * gen.center().x();
                       const double count_mean = r.a * model.t * gen.volume() * mid;
                       const double slope = mid > 0.0 ? r.c / mid : 0.0;
                       const std::uint64_t count = rng.poisson(count_mean);
                       for (std::uint64_t i = 0; i < count; ++i) {
                           const double time = rng.uniform(0.0, model.t);
                           nuclei.push_back({time, affine_in(gen, slope, rng)});
                       }
                   },
               },
               model.nucleation);
    return birth_growth_from_nuclei(nuclei, model.G, model.t, model.target, valid);
}

RealizedSet sample(const ModelSpec& model, const Window& w, RngStream& rng) {
    const Window valid = dilate_window(w, 1.0);
    RealizedSet s;
    s.n = model.n();
    s.valid_window = valid;
    std::visit(
        overloaded{
            [&](const RandomPointModel& v) { s.grains.push_back(PointGrain{v.pdf.sample(rng)}); },
            [&](const GrainUnionModel& v) {
                const std::int64_t count = v.count.sample(rng);
                for (std::int64_t i = 0; i < count; ++i) s.grains.push_back(v.grain.sample(rng));
            },
            [&](const PoissonLineModel& v) {
                const double rho = 0.5 * std::hypot(valid.side(0), valid.side(1));
                for (const Line& l : sample_poisson_lines(v.L, valid.center(), rho, rng)) s.grains.push_back(l);
            },
            [&](const PoissonSegmentModel& v) {
                const Window gen = dilate_window(valid, 0.5 * v.length.max());
                const std::uint64_t count = rng.poisson(v.center_intensity * gen.volume());
                for (std::uint64_t i = 0; i < count; ++i) {
                    const Point c = uniform_in(gen, rng);
                    const double length = v.length.sample(rng);
                    s.grains.push_back(centered_segment(c, length, orientation(rng)));
                }
            },
            [&](const BirthGrowthModel& v) { s = sample_birth_growth(v, w, rng); },
        },
        model.kind);
    keep_hitting(s.grains, valid);
    return s;
}

Segment extend_segment_to_min_length(const Segment& g, double min_length) {
    if (!(min_length > 0.0)) throw std::invalid_argument("extend_segment_to_min_length: min_length must be > 0");
    const double dx = g.b.x() - g.a.x();
    const double dy = g.b.y() - g.a.y();
    const double length = std::hypot(dx, dy);
    if (length == 0.0) throw std::invalid_argument("extend_segment_to_min_length: degenerate segment");
    if (length >= min_length) return g;
    const double mx = 0.5 * (g.a.x() + g.b.x());
    const double my = 0.5 * (g.a.y() + g.b.y());
    const double scale = 0.5 * min_length / length;
    Segment out = g;
    out.a.coords = {mx - scale * dx, my - scale * dy};
    out.b.coords = {mx + scale * dx, my + scale * dy};
    return out;
}

std::optional<double> gamma_lower_bound(const RealizedSet& s) {
    if (s.n >= 2) throw std::invalid_argument("gamma_lower_bound: only n = 0 and n = 1 sets are supported");
    if (s.empty()) return std::nullopt;
    const Window reach = dilate_window(s.valid_window, 1.0);
    double total = 0.0;
    double per_grain = s.n == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    for (const Grain& g : s.grains) {
        total += clip_measure(g, reach);
        if (s.n == 0) continue;
        // Lower bounds on H^1(g ∩ B_r(x)) / r for x on g and r in (0, 1).
        const double c = std::visit(
            overloaded{
                [](const Segment& v) { return std::min(1.0, std::hypot(v.b.x() - v.a.x(), v.b.y() - v.a.y())); },
                [](const Line&) { return 1.0; },
                [](const Circle& v) { return 2.0 * std::min(1.0, v.radius); },
                [](const Arc& v) { return std::min(1.0, arc_length(v)); },
                [](const auto&) -> double {
                    throw std::invalid_argument("gamma_lower_bound: grain kind does not match n");
                },
            },
            g);
        per_grain = std::min(per_grain, c);
    }
    if (!(total > 0.0)) return std::nullopt;
    return per_grain / total;
}

}  // namespace mdens
