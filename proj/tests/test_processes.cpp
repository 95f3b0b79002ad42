#include <gtest/gtest.h>

#include <cmath>

#include "mdens/processes.hpp"

using namespace mdens;

namespace {

const Window kUnit = make_window(point2(0, 0), point2(1, 1));

DensitySpec uniform_unit() { return DensitySpec{UniformBox{kUnit}}; }

ModelSpec segments_model(std::int64_t k, double length) {
    return ModelSpec{GrainUnionModel{CountLaw{Deterministic{k}},
                                     GrainLaw{SegmentLaw{uniform_unit(), LengthLaw{FixedLength{length}}}}}};
}

bool same_grain(const Grain& a, const Grain& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& va) {
            using T = std::decay_t<decltype(va)>;
            const T& vb = std::get<T>(b);
            if constexpr (std::is_same_v<T, PointGrain>) return va.at == vb.at;
            else if constexpr (std::is_same_v<T, Segment>) return va.a == vb.a && va.b == vb.b;
            else if constexpr (std::is_same_v<T, Line>) return va.p == vb.p && va.alpha == vb.alpha;
            else if constexpr (std::is_same_v<T, Arc>)
                return va.center == vb.center && va.radius == vb.radius && va.theta_lo == vb.theta_lo &&
                       va.theta_hi == vb.theta_hi;
            else return va.center == vb.center && va.radius == vb.radius;
        },
        a);
}

}  // namespace

TEST(RngStream, ReproducibleAndDistinct) {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        EXPECT_EQ(x, b.uniform());
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
    EXPECT_NE(RngStream(42, 7).uniform(), c.uniform());
}

TEST(DensitySpec, AffineXMassAndSampling) {
    const DensitySpec d{AffineX{kUnit, 0.5}};
    EXPECT_NEAR(*d.mass(kUnit), 1.0, 1e-15);
    // ∫_0^{1/2} (1 + 0.5 (x - 1/2)) dx = 1/2 - 1/16
    EXPECT_NEAR(*d.mass(make_window(point2(0, 0), point2(0.5, 1))), 0.4375, 1e-15);
    EXPECT_NEAR(*d.pdf(point2(1, 0.3)), 1.25, 1e-15);
    RngStream rng(1, 0);
    const int n = 200000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += d.sample(rng).x();
    mean /= n;
    // E[x] = 1/2 + c/12
    const double se = std::sqrt(1.0 / 12.0 / n);
    EXPECT_NEAR(mean, 0.5 + 0.5 / 12.0, 4 * se);
}

TEST(DensitySpec, ValidationNamesField) {
    try {
        validate(DensitySpec{AffineX{kUnit, 3.0}}, "grain.center");
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("grain.center.c"), std::string::npos);
    }
}

TEST(Sample, RandomPointInBox) {
    const ModelSpec m{RandomPointModel{uniform_unit()}};
    RngStream rng(3, 0);
    const RealizedSet s = sample(m, kUnit, rng);
    ASSERT_EQ(s.grains.size(), 1u);
    EXPECT_EQ(s.n, 0);
    EXPECT_TRUE(kUnit.contains(std::get<PointGrain>(s.grains[0]).at));
    EXPECT_EQ(s.valid_window, dilate_window(kUnit, 1.0));
}

TEST(Sample, DeterministicCountGivesExactlyTwoSegments) {
    for (std::uint64_t i = 0; i < 50; ++i) {
        RngStream rng(9, i);
        const RealizedSet s = sample(segments_model(2, 1.0), kUnit, rng);
        EXPECT_EQ(s.grains.size(), 2u);
        for (const Grain& g : s.grains) EXPECT_TRUE(std::holds_alternative<Segment>(g));
    }
}

TEST(Sample, BitIdenticalForSameStream) {
    const ModelSpec models[] = {
        ModelSpec{PoissonLineModel{2.0}},
        ModelSpec{PoissonSegmentModel{3.0, LengthLaw{UniformLength{0.2, 0.6}}}},
        ModelSpec{BirthGrowthModel{ConstantRate{1.0}, 1.0, 0.5, GrowthTarget::Boundary}},
        segments_model(3, 0.5),
    };
    for (const ModelSpec& m : models) {
        RngStream a(77, 5), b(77, 5);
        const RealizedSet sa = sample(m, kUnit, a), sb = sample(m, kUnit, b);
        ASSERT_EQ(sa.grains.size(), sb.grains.size());
        for (std::size_t i = 0; i < sa.grains.size(); ++i) EXPECT_TRUE(same_grain(sa.grains[i], sb.grains[i]));
    }
}

TEST(Sample, GrainsAllMeetValidWindow) {
    const ModelSpec m{PoissonSegmentModel{2.0, LengthLaw{FixedLength{0.5}}}};
    for (std::uint64_t i = 0; i < 20; ++i) {
        RngStream rng(4, i);
        const RealizedSet s = sample(m, kUnit, rng);
        for (const Grain& g : s.grains) EXPECT_TRUE(intersects(g, s.valid_window));
    }
}

TEST(PoissonLines, HitCountMatchesTwoRL) {
    // The number of lines within r of the origin is Poisson(2 r L).
    const double L = 1.5, r = 0.4;
    const ModelSpec m{PoissonLineModel{L}};
    const Window w = make_window(point2(-0.5, -0.5), point2(0.5, 0.5));
    const int M = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < M; ++i) {
        RngStream rng(21, static_cast<std::uint64_t>(i));
        int hits = 0;
        for (const Grain& g : sample(m, w, rng).grains) hits += distance(point2(0, 0), g) <= r ? 1 : 0;
        sum += hits;
        sum2 += hits * hits;
    }
    const double mean = sum / M;
    const double se = std::sqrt((sum2 / M - mean * mean) / M);
    EXPECT_NEAR(mean, 2.0 * r * L, 4 * se);
}

TEST(PoissonLines, ScaleCovariance) {
    // Doubling lengths and halving L maps every line exactly to twice its offset.
    const Point c = point2(0, 0);
    RngStream a(5, 1), b(5, 1);
    const auto small = sample_poisson_lines(1.0, c, 1.5, a);
    const auto big = sample_poisson_lines(0.5, c, 3.0, b);
    ASSERT_EQ(small.size(), big.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        EXPECT_EQ(big[i].alpha, small[i].alpha);
        EXPECT_EQ(big[i].p, 2.0 * small[i].p);
        const Point x = point2(0.3, -0.2);
        EXPECT_EQ(distance(point2(0.6, -0.4), big[i]), 2.0 * distance(x, small[i]));
    }
}

TEST(PoissonSegments, StationaryLengthIntensity) {
    const double lambda = 2.0, ell = 0.5;
    const ModelSpec m{PoissonSegmentModel{lambda, LengthLaw{FixedLength{ell}}}};
    const int M = 4000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < M; ++i) {
        RngStream rng(8, static_cast<std::uint64_t>(i));
        double h = 0.0;
        for (const Grain& g : sample(m, kUnit, rng).grains) h += clip_measure(g, kUnit);
        sum += h;
        sum2 += h * h;
    }
    const double mean = sum / M;
    const double se = std::sqrt((sum2 / M - mean * mean) / M);
    EXPECT_NEAR(mean, lambda * ell * kUnit.volume(), 4 * se);
}

TEST(BirthGrowth, ZeroRateIsEmpty) {
    const BirthGrowthModel m{ConstantRate{0.0}, 1.0, 0.5, GrowthTarget::Boundary};
    RngStream rng(1, 1);
    EXPECT_TRUE(sample_birth_growth(m, kUnit, rng).empty());
}

TEST(BirthGrowth, SingleNucleusGivesFullCircle) {
    const std::vector<Nucleus> nuclei{{0.0, point2(0, 0)}};
    const RealizedSet s = birth_growth_from_nuclei(nuclei, 1.0, 0.5, GrowthTarget::Boundary, dilate_window(kUnit, 1.0));
    ASSERT_EQ(s.grains.size(), 1u);
    const auto& c = std::get<Circle>(s.grains[0]);
    EXPECT_EQ(c.radius, 0.5);
    EXPECT_EQ(c.center, point2(0, 0));
    const RealizedSet solid = birth_growth_from_nuclei(nuclei, 1.0, 0.5, GrowthTarget::Solid, dilate_window(kUnit, 1.0));
    EXPECT_EQ(solid.n, 2);
    EXPECT_TRUE(std::holds_alternative<Disk>(solid.grains[0]));
}

TEST(BirthGrowth, NucleusCountPerUnitArea) {
    // a t = 0.5 nuclei per unit area; every disk centered in W meets W ⊕ 1.
    const BirthGrowthModel m{ConstantRate{1.0}, 1.0, 0.5, GrowthTarget::Solid};
    const int M = 4000;
    double sum = 0.0;
    for (int i = 0; i < M; ++i) {
        RngStream rng(12, static_cast<std::uint64_t>(i));
        for (const Grain& g : sample_birth_growth(m, kUnit, rng).grains) {
            sum += kUnit.contains(std::get<Disk>(g).center) ? 1.0 : 0.0;
        }
    }
    const double expected = 0.5 * kUnit.volume();
    EXPECT_NEAR(sum / M, expected, 4 * std::sqrt(expected / M));
}

TEST(BirthGrowth, AffineRateRejectsNegativeIntensity) {
    const BirthGrowthModel m{AffineRate{1.0, -2.0}, 1.0, 0.5, GrowthTarget::Boundary};
    RngStream rng(1, 1);
    EXPECT_THROW(sample_birth_growth(m, kUnit, rng), std::invalid_argument);
}

TEST(ExtendSegment, Examples) {
    const Segment long_seg{point2(0, 0), point2(3, 0)};
    const Segment same = extend_segment_to_min_length(long_seg, 2.0);
    EXPECT_EQ(same.a, long_seg.a);
    EXPECT_EQ(same.b, long_seg.b);

    const Segment e = extend_segment_to_min_length(Segment{point2(0, 0), point2(1, 0)}, 2.0);
    EXPECT_NEAR(e.a.x(), -0.5, 1e-15);
    EXPECT_NEAR(e.b.x(), 1.5, 1e-15);
    EXPECT_EQ(e.a.y(), 0.0);

    const Segment unit{point2(0, 0), point2(1, 0)};
    const Segment fixed = extend_segment_to_min_length(unit, 1.0);
    EXPECT_EQ(fixed.a, unit.a);
    EXPECT_EQ(fixed.b, unit.b);
}

TEST(ExtendSegment, PreservesMidpointAndDirection) {
    const Segment g{point2(0.3, -0.2), point2(0.5, 0.1)};
    const Segment e = extend_segment_to_min_length(g, 2.0);
    EXPECT_NEAR(0.5 * (e.a.x() + e.b.x()), 0.4, 1e-12);
    EXPECT_NEAR(0.5 * (e.a.y() + e.b.y()), -0.05, 1e-12);
    EXPECT_NEAR(std::hypot(e.b.x() - e.a.x(), e.b.y() - e.a.y()), 2.0, 1e-12);
    const double cross = (e.b.x() - e.a.x()) * 0.3 - (e.b.y() - e.a.y()) * 0.2;
    EXPECT_NEAR(cross, 0.0, 1e-12);
}

TEST(GammaLowerBound, Examples) {
    RealizedSet one;
    one.n = 1;
    one.valid_window = make_window(point2(-1, -1), point2(2, 2));
    one.grains = {Segment{point2(0, 0), point2(1, 0)}};
    EXPECT_NEAR(*gamma_lower_bound(one), 1.0, 1e-15);

    RealizedSet two = one;
    two.grains.push_back(Segment{point2(0, 1), point2(1, 1)});
    EXPECT_NEAR(*gamma_lower_bound(two), 0.5, 1e-15);

    RealizedSet pt;
    pt.n = 0;
    pt.valid_window = one.valid_window;
    pt.grains = {PointGrain{point2(0.5, 0.5)}};
    EXPECT_EQ(*gamma_lower_bound(pt), 1.0);

    RealizedSet empty = one;
    empty.grains.clear();
    EXPECT_FALSE(gamma_lower_bound(empty).has_value());

    RealizedSet solid = one;
    solid.n = 2;
    EXPECT_THROW(gamma_lower_bound(solid), std::invalid_argument);
}

TEST(GammaLowerBound, CertifiesBallMassInequality) {
    // η(B_r(x)) >= γ r for x on the set inside the valid window, r < 1, with
    // η = H^1(s ∩ valid ⊕ 1 ∩ ·) / H^1(s ∩ valid ⊕ 1).
    const ModelSpec models[] = {
        ModelSpec{PoissonSegmentModel{2.0, LengthLaw{UniformLength{0.2, 0.8}}}},
        ModelSpec{PoissonLineModel{1.0}},
        ModelSpec{BirthGrowthModel{ConstantRate{1.0}, 1.0, 0.5, GrowthTarget::Boundary}},
    };
    for (const ModelSpec& m : models) {
        for (std::uint64_t i = 0; i < 10; ++i) {
            RngStream rng(30, i);
            const RealizedSet s = sample(m, kUnit, rng);
            const auto gamma = gamma_lower_bound(s);
            if (!gamma) continue;
            const Window reach = dilate_window(s.valid_window, 1.0);
            double total = 0.0;
            for (const Grain& g : s.grains) total += clip_measure(g, reach);
            for (const Grain& g : s.grains) {
                for (const Grain& piece : clip_grain(g, s.valid_window)) {
                    // Points on the piece: endpoints and midpoint.
                    std::vector<Point> xs;
                    if (const auto* seg = std::get_if<Segment>(&piece)) {
                        xs = {seg->a, seg->b, point2(0.5 * (seg->a.x() + seg->b.x()), 0.5 * (seg->a.y() + seg->b.y()))};
                    } else if (const auto* arc = std::get_if<Arc>(&piece)) {
                        for (double th : {arc->theta_lo, arc->theta_hi, 0.5 * (arc->theta_lo + arc->theta_hi)}) {
                            xs.push_back(point2(arc->center.x() + arc->radius * std::cos(th),
                                                arc->center.y() + arc->radius * std::sin(th)));
                        }
                    }
                    for (const Point& x : xs) {
                        for (double r : {0.01, 0.1, 0.5, 0.99}) {
                            double mass = 0.0;
                            for (const Grain& h : s.grains) {
                                for (const Grain& hp : clip_grain(h, reach)) mass += measure_in_ball(hp, x, r);
                            }
                            EXPECT_GE(mass / total, *gamma * r * (1.0 - 1e-9));
                        }
                    }
                }
            }
        }
    }
}

TEST(Validate, RejectsBadParameters) {
    EXPECT_THROW(validate(ModelSpec{PoissonLineModel{-1.0}}), std::invalid_argument);
    EXPECT_THROW(validate(ModelSpec{PoissonSegmentModel{1.0, LengthLaw{UniformLength{0.5, 0.2}}}}), std::invalid_argument);
    EXPECT_THROW(validate(segments_model(0, 1.0)), std::invalid_argument);
    EXPECT_THROW(validate(ModelSpec{BirthGrowthModel{ConstantRate{1.0}, 0.0, 0.5, GrowthTarget::Solid}}),
                 std::invalid_argument);
    EXPECT_NO_THROW(validate(segments_model(2, 1.0)));
    const ModelSpec solid{BirthGrowthModel{ConstantRate{1.0}, 1.0, 0.5, GrowthTarget::Solid}};
    EXPECT_EQ(solid.n(), 2);
    EXPECT_EQ(ModelSpec{RandomPointModel{DensitySpec{UniformBox{make_window(point1(0), point1(1))}}}}.d(), 1);
}
