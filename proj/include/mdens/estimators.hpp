#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdens/geometry.hpp"
#include "mdens/processes.hpp"

// =============================================================================
// Monte Carlo estimators of mean densities.
//
// Realization i of every estimator is drawn from RngStream(seed, i) and
// per-realization results are reduced in index order, so outputs are
// bit-identical for any worker count.
// =============================================================================

namespace mdens {

struct EstimatorConfig {
    std::vector<double> radii;         // strictly descending, each in (0, 1]
    std::int64_t replicates = 1000;    // M
    int grid_per_axis = 32;            // midpoint grid on the region
    std::uint64_t seed = 0;
    Window region;                     // A
    Window clip;                       // W, A strictly inside
    std::optional<Point> point;        // pointwise kinds; defaults to the center of A
    unsigned workers = 1;
};

// Throws std::invalid_argument naming the field and the constraint.
void validate(const EstimatorConfig& config, int model_dim);

struct PointEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t replicates = 0;
};

// Per-cell estimates of delta_oplus at the cell midpoints of `region`.
// Row-major over (axis 0, axis 1); 1-D regions have shape {n, 1}.
struct DensityField {
    Window region;
    std::array<int, 2> shape{1, 1};
    double r = 0.0;
    std::vector<PointEstimate> cells;
};

enum class EstimatorKind { Oplus, Scale, Integrated };

const char* kind_name(EstimatorKind kind);
EstimatorKind parse_kind(const std::string& name);

struct SweepRow {
    double r = 0.0;
    PointEstimate estimate;
    std::optional<double> reference;
    std::optional<double> abs_error;
};

struct SweepReport {
    std::string model;
    std::string kind;
    std::vector<SweepRow> rows;
};

// Short model family name, used in report metadata.
std::string model_name(const ModelSpec& model);

PointEstimate hit_prob(const ModelSpec& model, const Point& x, double r, std::int64_t M,
                       std::uint64_t seed, unsigned workers = 1);
PointEstimate delta_oplus(const ModelSpec& model, const Point& x, double r, std::int64_t M,
                          std::uint64_t seed, unsigned workers = 1);
PointEstimate delta_scale(const ModelSpec& model, const Point& x, double r, std::int64_t M,
                          std::uint64_t seed, unsigned workers = 1);

DensityField density_field(const ModelSpec& model, const EstimatorConfig& config, double r);
PointEstimate integrated_estimate(const ModelSpec& model, const EstimatorConfig& config, double r);

// Direct MC mean of H^n(Θ ∩ a). The first overload samples on `a` itself; the
// second uses the config's clip window and seed, sharing realizations with
// integrated_estimate.
PointEstimate expected_measure_oracle(const ModelSpec& model, const Window& a, std::int64_t M,
                                      std::uint64_t seed, unsigned workers = 1);
PointEstimate expected_measure_oracle(const ModelSpec& model, const EstimatorConfig& config);

// r -> 0 limit of the estimator when the model has a closed form; for the
// integrated kind the limit over the config region.
std::optional<double> closed_form_density(const ModelSpec& model, const Point& x);
std::optional<double> closed_form_measure(const ModelSpec& model, const Window& a);

// One row per config radius; all radii share the same realizations.
SweepReport r_sweep(const ModelSpec& model, const EstimatorConfig& config, EstimatorKind kind);

struct Prop9Record {
    PointEstimate theta_ratio;
    PointEstimate count_ratio;
    PointEstimate factored_ratio;
    PointEstimate overlap_ratio;
};

// The single-grain term uses the first grain E_1 of each realization, which is
// distributed as E and independent of Φ (every count law has Φ >= 1).
Prop9Record prop9_triple(const GrainUnionModel& model, const Point& x, double r, std::int64_t M,
                         std::uint64_t seed, unsigned workers = 1);

struct CoveringCheck {
    bool skipped = false;   // empty realization: nothing to check
    double lhs = 0.0;
    double rhs = 0.0;
    double gamma = 0.0;
    double quadrature_bound = 0.0;  // on lhs, same units
    bool ok = true;
};

// Covering bound for K = s ∩ valid_window against the enlargement measured on
// valid_window ⊕ r. Requires s.n < 2 and r in (0, 2).
CoveringCheck covering_bound_check(const RealizedSet& s, double r, int resolution);

}  // namespace mdens
