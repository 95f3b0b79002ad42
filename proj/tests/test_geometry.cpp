#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mdens/geometry.hpp"

using namespace mdens;

namespace {

constexpr double kExact = 1e-12;

// Dense parametric sampling of a grain, the brute-force distance oracle.
double sampled_distance(const Point& x, const Grain& g, int samples) {
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double px, double py) { best = std::min(best, std::hypot(x.x() - px, x.y() - py)); };
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointGrain>) {
                consider(v.at.x(), v.at.y());
            } else if constexpr (std::is_same_v<T, Segment>) {
                for (int i = 0; i <= samples; ++i) {
                    const double t = static_cast<double>(i) / samples;
                    consider(v.a.x() + t * (v.b.x() - v.a.x()), v.a.y() + t * (v.b.y() - v.a.y()));
                }
            } else if constexpr (std::is_same_v<T, Line>) {
                const double c = std::cos(v.alpha), s = std::sin(v.alpha);
                for (int i = 0; i <= samples; ++i) {
                    const double t = -20.0 + 40.0 * i / samples;
                    consider(v.p * c - t * s, v.p * s + t * c);
                }
            } else if constexpr (std::is_same_v<T, Circle>) {
                for (int i = 0; i < samples; ++i) {
                    const double th = kTwoPi * i / samples;
                    consider(v.center.x() + v.radius * std::cos(th), v.center.y() + v.radius * std::sin(th));
                }
            } else if constexpr (std::is_same_v<T, Arc>) {
                for (int i = 0; i <= samples; ++i) {
                    const double th = v.theta_lo + (v.theta_hi - v.theta_lo) * i / samples;
                    consider(v.center.x() + v.radius * std::cos(th), v.center.y() + v.radius * std::sin(th));
                }
            } else {
                // Disk: boundary circle plus the interior indicator.
                const double d = std::hypot(x.x() - v.center.x(), x.y() - v.center.y());
                if (d <= v.radius) best = 0.0;
                for (int i = 0; i < samples; ++i) {
                    const double th = kTwoPi * i / samples;
                    consider(v.center.x() + v.radius * std::cos(th), v.center.y() + v.radius * std::sin(th));
                }
            }
        },
        g);
    return best;
}

Grain random_grain(std::mt19937_64& rng, int kind) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> pos(0.2, 1.5);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    switch (kind) {
        case 0: return PointGrain{point2(u(rng), u(rng))};
        case 1: return Segment{point2(u(rng), u(rng)), point2(u(rng), u(rng))};
        case 2: return Line{u(rng), kPi * (1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng))};
        case 3: return Circle{point2(u(rng), u(rng)), pos(rng)};
        case 4: {
            const double lo = ang(rng);
            return Arc{point2(u(rng), u(rng)), pos(rng), lo, lo + std::uniform_real_distribution<double>(0.1, kTwoPi)(rng)};
        }
        default: return Disk{point2(u(rng), u(rng)), pos(rng)};
    }
}

// Oracle for the 1e-9 check: dense sampling of the parameter, then
// golden-section refinement around the best sample.
double oracle_distance(const Point& x, const Grain& g) {
    if (std::holds_alternative<Disk>(g)) {
        const auto& d = std::get<Disk>(g);
        return std::max(0.0, std::hypot(x.x() - d.center.x(), x.y() - d.center.y()) - d.radius);
    }
    if (std::holds_alternative<PointGrain>(g)) return sampled_distance(x, g, 1);
    // Parametric curve c(t), t in [0, 1].
    auto curve = [&](double t) -> std::pair<double, double> {
        return std::visit(
            [&](const auto& v) -> std::pair<double, double> {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Segment>) {
                    return {v.a.x() + t * (v.b.x() - v.a.x()), v.a.y() + t * (v.b.y() - v.a.y())};
                } else if constexpr (std::is_same_v<T, Line>) {
                    const double s = -20.0 + 40.0 * t;
                    return {v.p * std::cos(v.alpha) - s * std::sin(v.alpha), v.p * std::sin(v.alpha) + s * std::cos(v.alpha)};
                } else if constexpr (std::is_same_v<T, Circle>) {
                    return {v.center.x() + v.radius * std::cos(kTwoPi * t), v.center.y() + v.radius * std::sin(kTwoPi * t)};
                } else if constexpr (std::is_same_v<T, Arc>) {
                    const double th = v.theta_lo + (v.theta_hi - v.theta_lo) * t;
                    return {v.center.x() + v.radius * std::cos(th), v.center.y() + v.radius * std::sin(th)};
                } else {
                    return {0.0, 0.0};
                }
            },
            g);
    };
    auto dist = [&](double t) {
        const auto [px, py] = curve(t);
        return std::hypot(x.x() - px, x.y() - py);
    };
    const int n = 4000;
    int best_i = 0;
    double best = dist(0.0);
    for (int i = 1; i <= n; ++i) {
        const double d = dist(static_cast<double>(i) / n);
        if (d < best) {
            best = d;
            best_i = i;
        }
    }
    double lo = std::max(0.0, (best_i - 1.0) / n);
    double hi = std::min(1.0, (best_i + 1.0) / n);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
        const double a = hi - phi * (hi - lo);
        const double b = lo + phi * (hi - lo);
        if (dist(a) < dist(b)) hi = b; else lo = a;
    }
    return std::min({best, dist(0.5 * (lo + hi)), dist(0.0), dist(1.0)});
}

}  // namespace

TEST(UnitBallVolume, KnownValues) {
    EXPECT_DOUBLE_EQ(unit_ball_volume(0), 1.0);
    EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
    EXPECT_NEAR(unit_ball_volume(2), kPi, kExact);
}

TEST(Distance, ClosedFormExamples) {
    EXPECT_NEAR(distance(point2(0, 0), Segment{point2(1, 0), point2(2, 0)}), 1.0, kExact);
    EXPECT_NEAR(distance(point2(0, 1), Line{0.0, kPi / 2}), 1.0, kExact);
    EXPECT_NEAR(distance(point2(0, 0), Circle{point2(3, 0), 1.0}), 2.0, kExact);
    EXPECT_NEAR(distance(point2(0, 0), Disk{point2(3, 0), 1.0}), 2.0, kExact);
    EXPECT_EQ(distance(point2(2.5, 0), Disk{point2(3, 0), 1.0}), 0.0);
    // Arc of the unit circle in the upper half plane; (0, -2) projects outside it.
    EXPECT_NEAR(distance(point2(0, -2), Arc{point2(0, 0), 1.0, 0.0, kPi}), std::sqrt(5.0), kExact);
    EXPECT_NEAR(distance(point2(0, 3), Arc{point2(0, 0), 1.0, 0.0, kPi}), 2.0, kExact);
    EXPECT_NEAR(distance(point1(0.0), PointGrain{point1(0.75)}), 0.75, kExact);
}

TEST(Distance, DimensionMismatchThrows) {
    EXPECT_THROW(distance(point1(0.0), Segment{point2(1, 0), point2(2, 0)}), std::invalid_argument);
}

TEST(Distance, AgreesWithBruteForceOracle) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int kind = 0; kind < 6; ++kind) {
        for (int trial = 0; trial < 40; ++trial) {
            const Grain g = random_grain(rng, kind);
            const Point x = point2(u(rng), u(rng));
            if (std::holds_alternative<Line>(g)) {
                // Keep the foot of the perpendicular inside the sampled stretch.
                ASSERT_LT(std::hypot(x.x(), x.y()), 10.0);
            }
            EXPECT_NEAR(distance(x, g), oracle_distance(x, g), 1e-9) << "kind " << kind << " trial " << trial;
        }
    }
}

TEST(Distance, ZeroExactlyOnParameterizedPoints) {
    const Segment s{point2(0.1, 0.2), point2(1.3, -0.7)};
    const Circle c{point2(0.5, 0.5), 0.75};
    const Arc a{point2(-1, 0), 2.0, 0.5, 2.0};
    for (int i = 0; i <= 10; ++i) {
        const double t = i / 10.0;
        EXPECT_NEAR(distance(point2(0.1 + 1.2 * t, 0.2 - 0.9 * t), s), 0.0, 1e-15);
        const double th = kTwoPi * t;
        EXPECT_NEAR(distance(point2(0.5 + 0.75 * std::cos(th), 0.5 + 0.75 * std::sin(th)), c), 0.0, 1e-15);
        const double ta = 0.5 + 1.5 * t;
        EXPECT_NEAR(distance(point2(-1 + 2 * std::cos(ta), 2 * std::sin(ta)), a), 0.0, 1e-15);
    }
    EXPECT_GT(distance(point2(0.0, 0.0), s), 0.0);
}

TEST(DistanceToSet, EmptyAndMinimum) {
    std::vector<Grain> none;
    EXPECT_FALSE(distance_to_set(point2(0, 0), none).has_value());
    EXPECT_FALSE(in_enlargement(point2(0, 0), none, 100.0));
    std::vector<Grain> two{Segment{point2(1, 0), point2(2, 0)}, Circle{point2(0, 5), 1.0}};
    EXPECT_NEAR(*distance_to_set(point2(0, 0), two), 1.0, kExact);
    std::vector<Grain> one{Circle{point2(0, 5), 1.0}};
    EXPECT_NEAR(*distance_to_set(point2(0, 0), one), 4.0, kExact);
}

TEST(InEnlargement, ClosedConvention) {
    std::vector<Grain> s{Segment{point2(1, 0), point2(2, 0)}};
    EXPECT_TRUE(in_enlargement(point2(1.5, 0), s, 1e-9));
    EXPECT_TRUE(in_enlargement(point2(0, 0), s, 1.0));
    EXPECT_FALSE(in_enlargement(point2(0, 0), s, std::nextafter(1.0, 0.0)));
}

TEST(ClipMeasure, Examples) {
    const Window unit = make_window(point2(0, 0), point2(1, 1));
    EXPECT_NEAR(clip_measure(Line{0.0, kPi / 2}, unit), 1.0, kExact);
    EXPECT_NEAR(clip_measure(Segment{point2(-1, 0), point2(2, 0)}, unit), 1.0, kExact);
    EXPECT_NEAR(clip_measure(Circle{point2(0, 0), 1.0}, make_window(point2(-2, -2), point2(2, 2))), kTwoPi, kExact);
    // Quarter circle inside the unit box.
    EXPECT_NEAR(clip_measure(Circle{point2(0, 0), 1.0}, unit), kPi / 2, kExact);
    // Diagonal chord.
    EXPECT_NEAR(clip_measure(Line{std::sqrt(0.5), kPi / 4}, unit), std::sqrt(2.0), 1e-12);
    EXPECT_EQ(clip_measure(PointGrain{point2(0.5, 0.5)}, unit), 1.0);
    EXPECT_EQ(clip_measure(PointGrain{point2(1.5, 0.5)}, unit), 0.0);
    // Unit disk minus nothing: full area inside a big box, quarter in the unit box.
    EXPECT_NEAR(clip_measure(Disk{point2(0, 0), 1.0}, make_window(point2(-2, -2), point2(2, 2))), kPi, kExact);
    EXPECT_NEAR(clip_measure(Disk{point2(0, 0), 1.0}, unit), kPi / 4, kExact);
}

TEST(ClipMeasure, MonotoneAndAdditive) {
    const Circle c{point2(0.3, 0.1), 0.9};
    const Arc a{point2(0.3, 0.1), 0.9, -1.0, 3.5};
    const Segment s{point2(-0.4, -0.3), point2(1.6, 1.2)};
    const Window left = make_window(point2(-1, -1), point2(0.4, 2));
    const Window right = make_window(point2(0.4, -1), point2(2, 2));
    const Window all = make_window(point2(-1, -1), point2(2, 2));
    for (const Grain& g : std::vector<Grain>{c, a, s}) {
        EXPECT_NEAR(clip_measure(g, left) + clip_measure(g, right), clip_measure(g, all), 1e-12);
        EXPECT_LE(clip_measure(g, left), clip_measure(g, all) + 1e-15);
    }
    EXPECT_NEAR(clip_measure(a, all), arc_length(a), 1e-12);
}

TEST(MeasureInBall, Examples) {
    EXPECT_NEAR(measure_in_ball(Line{0.0, kPi / 2}, point2(3, 0), 0.25), 0.5, kExact);
    EXPECT_EQ(measure_in_ball(Segment{point2(5, 5), point2(6, 6)}, point2(0, 0), 1.0), 0.0);
    EXPECT_NEAR(measure_in_ball(Circle{point2(0, 0), 1.0}, point2(1, 0), 1.0), 2.0 * kPi / 3.0, kExact);
    EXPECT_NEAR(measure_in_ball(Segment{point2(0, 0), point2(1, 0)}, point2(0, 0), 0.3), 0.3, kExact);
    EXPECT_EQ(measure_in_ball(PointGrain{point2(0, 0)}, point2(0.1, 0), 0.1), 1.0);
}

TEST(MeasureInBall, MonotoneInRadius) {
    const Arc a{point2(0, 0), 1.0, 0.2, 4.0};
    double prev = 0.0;
    for (double r = 0.05; r < 2.5; r += 0.05) {
        const double m = measure_in_ball(a, point2(0.8, 0.3), r);
        EXPECT_GE(m + 1e-15, prev);
        prev = m;
    }
    EXPECT_NEAR(prev, arc_length(a), 1e-12);
}

TEST(BoundaryArcs, SingleDisk) {
    const std::vector<Disk> d{Disk{point2(0, 0), 1.0}};
    const auto arcs = boundary_arcs(d);
    ASSERT_EQ(arcs.size(), 1u);
    EXPECT_NEAR(arc_length(arcs[0]), kTwoPi, kExact);
}

TEST(BoundaryArcs, TwoUnitDisks) {
    // y = (cos t, sin t) lies in the other disk iff cos t > 1/2: 2 pi / 3 covered per circle.
    const double expected = 2.0 * (kTwoPi - kTwoPi / 3.0);
    const std::vector<Disk> d{Disk{point2(0, 0), 1.0}, Disk{point2(1, 0), 1.0}};
    const auto arcs = boundary_arcs(d);
    ASSERT_EQ(arcs.size(), 2u);
    double total = 0.0;
    for (const Arc& a : arcs) {
        EXPECT_NEAR(arc_length(a), 4.0 * kPi / 3.0, 1e-9);
        total += arc_length(a);
    }
    EXPECT_NEAR(total, expected, 1e-9);
    EXPECT_NEAR(total, 8.0 * kPi / 3.0, 1e-9);
}

TEST(BoundaryArcs, Containment) {
    const std::vector<Disk> d{Disk{point2(0, 0), 1.0}, Disk{point2(0, 0), 3.0}};
    const auto arcs = boundary_arcs(d);
    ASSERT_EQ(arcs.size(), 1u);
    EXPECT_NEAR(arc_length(arcs[0]), 6.0 * kPi, kExact);
}

TEST(BoundaryArcs, RelabelingInvariantAndContainedDiskHarmless) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0), rad(0.2, 0.7);
    std::vector<Disk> disks;
    for (int i = 0; i < 12; ++i) disks.push_back(Disk{point2(u(rng), u(rng)), rad(rng)});
    auto total = [](const std::vector<Disk>& ds) {
        double t = 0.0;
        for (const Arc& a : boundary_arcs(ds)) t += arc_length(a);
        return t;
    };
    const double base = total(disks);
    std::vector<Disk> shuffled = disks;
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[0], shuffled[5]);
    EXPECT_NEAR(total(shuffled), base, 1e-9);
    // A disk strictly inside an existing one changes nothing.
    std::vector<Disk> more = disks;
    more.push_back(Disk{disks[3].center, 0.5 * disks[3].radius});
    EXPECT_NEAR(total(more), base, 1e-9);
    // Clipped to a window, adding a covered disk cannot increase the length.
    const Window w = make_window(point2(0.5, 0.5), point2(1.5, 1.5));
    auto clipped = [&](const std::vector<Disk>& ds) {
        double t = 0.0;
        for (const Arc& a : boundary_arcs(ds)) t += clip_measure(a, w);
        return t;
    };
    EXPECT_LE(clipped(more), clipped(disks) + 1e-12);
}

TEST(DilateWindow, Examples) {
    const Window unit = make_window(point2(0, 0), point2(1, 1));
    EXPECT_EQ(dilate_window(unit, 1.0), make_window(point2(-1, -1), point2(2, 2)));
    EXPECT_EQ(dilate_window(unit, 0.0), unit);
    EXPECT_EQ(dilate_window(make_window(point1(0), point1(1)), 0.5), make_window(point1(-0.5), point1(1.5)));
    EXPECT_THROW(dilate_window(unit, -1.0), std::invalid_argument);
}

TEST(Window, RejectsDegenerate) {
    EXPECT_THROW(make_window(point2(0, 0), point2(0, 1)), std::invalid_argument);
    EXPECT_THROW(make_window(point1(1), point1(0)), std::invalid_argument);
}

TEST(EnlargementVolume, StadiumAndAnnulus) {
    const double r = 0.1;
    const std::vector<Grain> seg{Segment{point2(0, 0), point2(1, 0)}};
    const Window a = make_window(point2(-1, -1), point2(2, 1));
    const double stadium = 2.0 * 1.0 * r + kPi * r * r;  // 0.231416
    EXPECT_NEAR(stadium, 0.23141592653589793, 1e-15);
    const int res = 600;
    EXPECT_NEAR(enlargement_volume(seg, a, r, res), stadium, quadrature_error_bound(seg, a, r, res));

    const std::vector<Grain> circle{Circle{point2(0, 0), 1.0}};
    const Window b = make_window(point2(-1.5, -1.5), point2(1.5, 1.5));
    const double annulus = kPi * ((1 + r) * (1 + r) - (1 - r) * (1 - r));  // 4 pi R r
    EXPECT_NEAR(annulus, 1.2566370614359172, 1e-15);
    EXPECT_NEAR(enlargement_volume(circle, b, r, res), annulus, quadrature_error_bound(circle, b, r, res));
    EXPECT_EQ(enlargement_volume(std::vector<Grain>{}, b, r, res), 0.0);
}

TEST(EnlargementVolume, OneDimensional) {
    const std::vector<Grain> pts{PointGrain{point1(0.5)}};
    const Window a = make_window(point1(0), point1(1));
    EXPECT_NEAR(enlargement_volume(pts, a, 0.1, 1000), 0.2, quadrature_error_bound(pts, a, 0.1, 1000));
}

TEST(EnlargementVolume, MonotoneInRadiusAndGrains) {
    const std::vector<Grain> one{Segment{point2(0, 0), point2(1, 0.4)}};
    std::vector<Grain> two = one;
    two.push_back(Circle{point2(0.5, 0.5), 0.3});
    const Window a = make_window(point2(-0.5, -0.5), point2(1.5, 1.5));
    double prev = 0.0;
    for (double r = 0.02; r <= 0.5; r += 0.04) {
        const double v = enlargement_volume(one, a, r, 128);
        EXPECT_GE(v, prev);
        EXPECT_GE(enlargement_volume(two, a, r, 128), v);
        prev = v;
    }
}

TEST(EnlargementVolume, RefinementWithinBound) {
    const std::vector<Grain> g{Segment{point2(0.1, 0.2), point2(0.9, 0.7)}, Circle{point2(0.4, 0.6), 0.25}};
    const Window a = make_window(point2(0, 0), point2(1, 1));
    for (int res : {64, 128, 256}) {
        const double coarse = enlargement_volume(g, a, 0.05, res);
        const double fine = enlargement_volume(g, a, 0.05, 2 * res);
        EXPECT_LE(std::fabs(coarse - fine),
                  quadrature_error_bound(g, a, 0.05, res) + quadrature_error_bound(g, a, 0.05, 2 * res));
    }
}

TEST(EnlargementVolume, WorkerCountIndependent) {
    const std::vector<Grain> g{Segment{point2(0.1, 0.2), point2(0.9, 0.7)}, Line{0.3, 1.0}};
    const Window a = make_window(point2(0, 0), point2(1, 1));
    const double one = enlargement_volume(g, a, 0.07, 300, 1);
    EXPECT_EQ(one, enlargement_volume(g, a, 0.07, 300, 3));
    EXPECT_EQ(one, enlargement_volume(g, a, 0.07, 300, 8));
}

TEST(EnlargementVolume, RejectsCoarseGrid) {
    const std::vector<Grain> g{PointGrain{point2(0, 0)}};
    EXPECT_THROW(enlargement_volume(g, make_window(point2(-1, -1), point2(1, 1)), 0.1, 4), std::invalid_argument);
}

TEST(ClipGrain, PiecesCarryClippedMeasure) {
    const Window w = make_window(point2(0, 0), point2(1, 1));
    const std::vector<Grain> grains{Segment{point2(-1, 0.5), point2(2, 0.5)}, Line{0.5, 0.3},
                                    Circle{point2(0.5, 0.5), 0.7}, Arc{point2(0, 0), 0.8, -1.0, 2.0}};
    for (const Grain& g : grains) {
        double total = 0.0;
        for (const Grain& piece : clip_grain(g, w)) total += clip_measure(piece, w);
        EXPECT_NEAR(total, clip_measure(g, w), 1e-12);
    }
}
