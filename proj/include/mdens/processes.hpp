#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "mdens/geometry.hpp"
#include "mdens/rng.hpp"

// =============================================================================
// Random closed set families and their seeded samplers.
//
// Every sampler returns the realization restricted to the grains that meet
// W ⊕ 1 and records that box as the valid window: any enlargement of radius
// r <= 1 evaluated inside W is then exact.
//
// Draw order within a stream: count, then for each grain center, length
// (or radius), orientation.
// =============================================================================

namespace mdens {

// ---- laws ------------------------------------------------------------------

struct UniformBox {
    Window box;
};

// Density proportional to 1 + c (x_1 - mid_1) on the box, |c| * half-width <= 1.
struct AffineX {
    Window box;
    double c = 0.0;
};

struct GaussianTruncated {
    Point mean;
    double sigma = 1.0;
    Window box;
};

struct DensitySpec {
    std::variant<UniformBox, AffineX, GaussianTruncated> kind;

    const Window& support() const;
    int dim() const { return support().dim(); }
    Point sample(RngStream& rng) const;
    // Normalized density at x (GaussianTruncated: nullopt, no closed form).
    std::optional<double> pdf(const Point& x) const;
    // Probability of the box w, when a closed form exists.
    std::optional<double> mass(const Window& w) const;
};

struct Deterministic {
    std::int64_t k = 1;
};
// P(k) = (1 - p)^{k - 1} p on {1, 2, ...}
struct GeometricOnPositives {
    double p = 0.5;
};
struct OnePlusPoisson {
    double mean = 0.0;
};

struct CountLaw {
    std::variant<Deterministic, GeometricOnPositives, OnePlusPoisson> kind;

    std::int64_t sample(RngStream& rng) const;
    double mean() const;
};

struct FixedLength {
    double length = 1.0;
};
struct UniformLength {
    double lo = 0.5;
    double hi = 1.0;
};

struct LengthLaw {
    std::variant<FixedLength, UniformLength> kind;

    double sample(RngStream& rng) const;
    double mean() const;
    double max() const;
};

// Orientation is uniform on (0, pi].
struct SegmentLaw {
    DensitySpec center;
    LengthLaw length;
};

struct CircleLaw {
    DensitySpec center;
    double radius = 1.0;
};

struct GrainLaw {
    std::variant<SegmentLaw, CircleLaw> kind;

    Grain sample(RngStream& rng) const;
};

// ---- models ----------------------------------------------------------------

struct RandomPointModel {
    DensitySpec pdf;
};

// Θ = E_1 ∪ ... ∪ E_Φ, E_i i.i.d. and independent of Φ.
struct GrainUnionModel {
    CountLaw count;
    GrainLaw grain;
};

// Stationary isotropic Poisson line process: the number of lines hitting
// B_r(x) is Poisson(2 r L) and the length density is L.
struct PoissonLineModel {
    double L = 1.0;
};

// Stationary Poisson segment process: centers Poisson with the given
// intensity per unit area, i.i.d. lengths, uniform orientation.
struct PoissonSegmentModel {
    double center_intensity = 1.0;
    LengthLaw length;
};

struct ConstantRate {
    double a = 1.0;
};
// alpha(s, x) = a (1 + c x_1)
struct AffineRate {
    double a = 1.0;
    double c = 0.0;
};

enum class GrowthTarget { Boundary, Solid };

// Θ^t = ∪_{T_i <= t} B_{G (t - T_i)}(X_i) with Poisson nuclei of intensity
// alpha(s, x) ds dx; Boundary targets ∂Θ^t (n = 1), Solid targets Θ^t (n = 2).
struct BirthGrowthModel {
    std::variant<ConstantRate, AffineRate> nucleation;
    double G = 1.0;
    double t = 1.0;
    GrowthTarget target = GrowthTarget::Boundary;
};

struct ModelSpec {
    std::variant<RandomPointModel, GrainUnionModel, PoissonLineModel, PoissonSegmentModel,
                 BirthGrowthModel>
        kind;

    // Hausdorff dimension of the realizations.
    int n() const;
    // Ambient dimension.
    int d() const;
};

// Throws std::invalid_argument naming the offending parameter.
void validate(const ModelSpec& model);
void validate(const DensitySpec& density, const char* field);

// ---- samplers --------------------------------------------------------------

RealizedSet sample(const ModelSpec& model, const Window& w, RngStream& rng);
RealizedSet sample_birth_growth(const BirthGrowthModel& model, const Window& w, RngStream& rng);

struct Nucleus {
    double time;
    Point at;
};

// Deterministic part of the birth-and-growth sampler: disks or their union's
// boundary from given nuclei, restricted to grains meeting `valid`.
RealizedSet birth_growth_from_nuclei(std::span<const Nucleus> nuclei, double G, double t,
                                     GrowthTarget target, const Window& valid);

// Lines hitting the disk B_radius(center): Poisson(2 radius L) lines with
// offset uniform in (-radius, radius) about the center and alpha uniform in
// (0, pi].
std::vector<Line> sample_poisson_lines(double L, const Point& center, double radius, RngStream& rng);

// Homothetic extension about the midpoint to length min_length.
Segment extend_segment_to_min_length(const Segment& g, double min_length);

// Certified lower bound for Γ_W using η = H^n(s ∩ (valid_window ⊕ 1) ∩ ·),
// normalized. nullopt for an empty realization. Throws for n = 2.
std::optional<double> gamma_lower_bound(const RealizedSet& s);

}  // namespace mdens
