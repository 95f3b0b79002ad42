#include "mdens/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "mdens/kernels.hpp"
#include "mdens/parallel.hpp"

namespace mdens {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// b_k r^k
double ball_scale(int k, double r) {
    double s = unit_ball_volume(k);
    for (int i = 0; i < k; ++i) s *= r;
    return s;
}

double enlargement_norm(const ModelSpec& model, double r) { return ball_scale(model.d() - model.n(), r); }

// Sample mean and standard error, accumulated in index order.
PointEstimate summarize(const std::vector<double>& y, std::size_t stride = 1, std::size_t offset = 0) {
    PointEstimate e;
    const std::size_t m = stride == 0 ? 0 : y.size() / stride;
    e.replicates = static_cast<std::int64_t>(m);
    if (m == 0) return e;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += y[i * stride + offset];
    const double mean = sum / static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dv = y[i * stride + offset] - mean;
        ss += dv * dv;
    }
    e.value = mean;
    e.std_error = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m)) : 0.0;
    return e;
}

PointEstimate binomial(std::int64_t hits, std::int64_t M, double scale) {
    const double p = static_cast<double>(hits) / static_cast<double>(M);
    PointEstimate e;
    e.value = p / scale;
    e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(M)) / scale;
    e.replicates = M;
    return e;
}

// The pointwise estimators share realizations across radii by sampling on a
// fixed unit box around x.
Window local_box(const ModelSpec& model, const Point& x) {
    if (x.dim != model.d()) throw std::invalid_argument("point: dimension must match the model");
    Window w{x, x};
    for (int i = 0; i < x.dim; ++i) {
        w.lo.coords[i] -= 0.5;
        w.hi.coords[i] += 0.5;
    }
    return w;
}

void check_inputs(double r, std::int64_t M) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r: must be a finite value > 0");
    if (M < 1) throw std::invalid_argument("replicates: must be >= 1");
}

struct Grid {
    std::size_t nx = 1, ny = 1;
    double hx = 1.0, hy = 1.0;
    double x0 = 0.0, y0 = 0.0;

    double cell_volume() const { return hx * hy; }
    double row_y(std::size_t j, int dim) const {
        return dim == 2 ? y0 + (static_cast<double>(j) + 0.5) * hy : 0.0;
    }
};

Grid grid_on(const Window& a, int per_axis) {
    Grid g;
    g.nx = static_cast<std::size_t>(per_axis);
    g.hx = a.side(0) / static_cast<double>(per_axis);
    g.x0 = a.lo.x();
    if (a.dim() == 2) {
        g.ny = static_cast<std::size_t>(per_axis);
        g.hy = a.side(1) / static_cast<double>(per_axis);
        g.y0 = a.lo.y();
    }
    return g;
}

kernels::RowQuery row_query(const Grid& g, std::size_t j, int dim, double cutoff) {
    kernels::RowQuery q;
    q.y = g.row_y(j, dim);
    q.x0 = g.x0 + 0.5 * g.hx;
    q.hx = g.hx;
    q.n = g.nx;
    q.cutoff = cutoff;
    return q;
}

// Midpoint-rule area of a union of solid grains inside a.
double union_volume(std::span<const Grain> grains, const Window& a, int per_axis) {
    if (grains.empty()) return 0.0;
    const Grid g = grid_on(a, per_axis);
    const kernels::GrainBatch batch = kernels::make_batch(grains);
    std::vector<double> dist(g.nx);
    std::size_t inside = 0;
    for (std::size_t j = 0; j < g.ny; ++j) {
        kernels::row_min_distance(batch, row_query(g, j, a.dim(), 0.0), dist.data());
        inside += static_cast<std::size_t>(std::count(dist.begin(), dist.end(), 0.0));
    }
    return static_cast<double>(inside) * g.cell_volume();
}

constexpr int kSolidResolution = 256;

// H^n(s ∩ a); the solid case goes through quadrature since disks overlap.
double measure_in_window(const RealizedSet& s, const Window& a, int solid_resolution) {
    if (s.n == a.dim()) return union_volume(s.grains, a, solid_resolution);
    double total = 0.0;
    for (const Grain& g : s.grains) total += clip_measure(g, a);
    return total;
}

// H^n(s ∩ B_r(x)).
double measure_in_ball(const RealizedSet& s, const Point& x, double r) {
    if (s.n == x.dim) {
        Window box{x, x};
        for (int i = 0; i < x.dim; ++i) {
            box.lo.coords[i] -= r;
            box.hi.coords[i] += r;
        }
        const Grid g = grid_on(box, 64);
        const kernels::GrainBatch batch = kernels::make_batch(s.grains);
        std::vector<double> dist(g.nx);
        std::size_t inside = 0;
        for (std::size_t j = 0; j < g.ny; ++j) {
            const auto q = row_query(g, j, x.dim, 0.0);
            kernels::row_min_distance(batch, q, dist.data());
            for (std::size_t i = 0; i < g.nx; ++i) {
                const double px = q.x0 + static_cast<double>(i) * q.hx - x.x();
                const double py = q.y - x.y();
                if (dist[i] == 0.0 && px * px + py * py <= r * r) ++inside;
            }
        }
        return static_cast<double>(inside) * g.cell_volume();
    }
    double total = 0.0;
    for (const Grain& g : s.grains) total += measure_in_ball(g, x, r);
    return total;
}

// One pass over realizations sampled on config.clip, evaluating every radius
// on the midpoint grid of config.region.
struct IntegratedPass {
    std::size_t radii = 0;
    std::vector<double> values;           // [i * radii + k]: ν(Θ⊕r_k ∩ A) / (b r_k^{d-n})
    std::vector<double> oracle;           // H^n(Θ ∩ A) per realization
    std::vector<std::int64_t> cell_hits;  // per cell, for radii[0]
};

IntegratedPass integrated_pass(const ModelSpec& model, const EstimatorConfig& config,
                               const std::vector<double>& radii, bool want_oracle, bool want_cells) {
    const std::size_t M = static_cast<std::size_t>(config.replicates);
    const std::size_t K = radii.size();
    const int dim = config.region.dim();
    const Grid grid = grid_on(config.region, config.grid_per_axis);
    const double cutoff = *std::max_element(radii.begin(), radii.end());
    const int solid_resolution = std::max(kSolidResolution, 4 * config.grid_per_axis);

    IntegratedPass out;
    out.radii = K;
    out.values.assign(M * K, 0.0);
    if (want_oracle) out.oracle.assign(M, 0.0);
    if (want_cells) out.cell_hits.assign(grid.nx * grid.ny, 0);
    std::mutex merge;

    parallel_for(M, config.workers, [&](std::size_t begin, std::size_t end) {
        std::vector<double> dist(grid.nx);
        std::vector<std::int64_t> hits(want_cells ? grid.nx * grid.ny : 0, 0);
        std::vector<std::size_t> counts(K);
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng(config.seed, i);
            const RealizedSet s = sample(model, config.clip, rng);
            if (want_oracle) out.oracle[i] = measure_in_window(s, config.region, solid_resolution);
            if (s.empty()) continue;
            const kernels::GrainBatch batch = kernels::make_batch(s.grains);
            std::fill(counts.begin(), counts.end(), 0);
            for (std::size_t j = 0; j < grid.ny; ++j) {
                kernels::row_min_distance(batch, row_query(grid, j, dim, cutoff), dist.data());
                for (std::size_t c = 0; c < grid.nx; ++c) {
                    const double d = dist[c];
                    for (std::size_t k = 0; k < K; ++k) {
                        if (d <= radii[k]) ++counts[k];
                    }
                    if (want_cells && d <= radii[0]) ++hits[j * grid.nx + c];
                }
            }
            for (std::size_t k = 0; k < K; ++k) {
                out.values[i * K + k] =
                    static_cast<double>(counts[k]) * grid.cell_volume() / enlargement_norm(model, radii[k]);
            }
        }
        if (want_cells) {
            std::lock_guard<std::mutex> lock(merge);
            for (std::size_t c = 0; c < hits.size(); ++c) out.cell_hits[c] += hits[c];
        }
    });
    return out;
}

// Cell c = (i0, i1) maps to grid column i0 and row i1; fields are row-major
// over (axis 0, axis 1).
std::size_t field_index(std::size_t c, const Grid& g) {
    const std::size_t row = c / g.nx;
    const std::size_t col = c % g.nx;
    return col * g.ny + row;
}

}  // namespace

// =============================================================================
// Configuration
// =============================================================================

void validate(const EstimatorConfig& config, int model_dim) {
    auto bad = [](const std::string& field, const std::string& constraint) {
        throw std::invalid_argument("estimator." + field + ": " + constraint);
    };
    if (config.radii.empty()) bad("radii", "must list at least one radius");
    for (std::size_t k = 0; k < config.radii.size(); ++k) {
        const double r = config.radii[k];
        if (!(r > 0.0 && r <= 1.0)) {
            std::ostringstream os;
            os << "each r must lie in (0, 1], the small-radius regime where the density bound holds (got " << r
               << ")";
            bad("radii", os.str());
        }
        if (k > 0 && !(r < config.radii[k - 1])) bad("radii", "must be strictly descending");
    }
    if (config.replicates < 1) bad("replicates", "must be >= 1");
    if (config.grid_per_axis < 1) bad("grid_per_axis", "must be >= 1");
    if (config.workers < 1) bad("workers", "must be >= 1");
    if (!config.region.valid()) bad("region", "requires lo < hi componentwise");
    if (!config.clip.valid()) bad("clip", "requires lo < hi componentwise");
    if (config.region.dim() != model_dim) bad("region", "dimension must match the model");
    if (config.clip.dim() != model_dim) bad("clip", "dimension must match the model");
    for (int i = 0; i < model_dim; ++i) {
        if (!(config.clip.lo.coords[i] < config.region.lo.coords[i] &&
              config.region.hi.coords[i] < config.clip.hi.coords[i])) {
            bad("region", "must lie strictly inside the interior of clip");
        }
    }
    if (config.point && config.point->dim != model_dim) bad("point", "dimension must match the model");
}

const char* kind_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Oplus: return "oplus";
        case EstimatorKind::Scale: return "scale";
        case EstimatorKind::Integrated: return "integrated";
    }
    return "?";
}

EstimatorKind parse_kind(const std::string& name) {
    if (name == "oplus") return EstimatorKind::Oplus;
    if (name == "scale") return EstimatorKind::Scale;
    if (name == "integrated") return EstimatorKind::Integrated;
    throw std::invalid_argument("sweep.kind: must be one of oplus, scale, integrated (got \"" + name + "\")");
}

std::string model_name(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const RandomPointModel&) { return "random_point"; },
                          [](const GrainUnionModel&) { return "grain_union"; },
                          [](const PoissonLineModel&) { return "poisson_line"; },
                          [](const PoissonSegmentModel&) { return "poisson_segment"; },
                          [](const BirthGrowthModel&) { return "birth_growth"; },
                      },
                      model.kind);
}

// =============================================================================
// Closed forms
// =============================================================================

std::optional<double> closed_form_density(const ModelSpec& model, const Point& x) {
    return std::visit(
        overloaded{
            [&](const RandomPointModel& v) { return v.pdf.pdf(x); },
            [](const GrainUnionModel&) -> std::optional<double> { return std::nullopt; },
            [](const PoissonLineModel& v) -> std::optional<double> { return v.L; },
            [](const PoissonSegmentModel& v) -> std::optional<double> {
                return v.center_intensity * v.length.mean();
            },
            [](const BirthGrowthModel& v) -> std::optional<double> {
                double a = 0.0;
                if (const auto* c = std::get_if<ConstantRate>(&v.nucleation)) {
                    a = c->a;
                } else {
                    const auto& ar = std::get<AffineRate>(v.nucleation);
                    if (ar.c != 0.0) return std::nullopt;
                    a = ar.a;
                }
                // Boolean model with germ intensity a t and radii G (t - T), T ~ U(0, t).
                const double covered = kPi * a * v.G * v.G * v.t * v.t * v.t / 3.0;
                if (v.target == GrowthTarget::Solid) return 1.0 - std::exp(-covered);
                return kPi * a * v.G * v.t * v.t * std::exp(-covered);
            },
        },
        model.kind);
}

std::optional<double> closed_form_measure(const ModelSpec& model, const Window& a) {
    if (const auto* rp = std::get_if<RandomPointModel>(&model.kind)) return rp->pdf.mass(a);
    if (std::holds_alternative<GrainUnionModel>(model.kind)) return std::nullopt;
    const auto density = closed_form_density(model, a.center());
    if (!density) return std::nullopt;
    return *density * a.volume();
}

// =============================================================================
// Pointwise estimators
// =============================================================================

PointEstimate hit_prob(const ModelSpec& model, const Point& x, double r, std::int64_t M,
                       std::uint64_t seed, unsigned workers) {
    check_inputs(r, M);
    const Window box = local_box(model, x);
    std::vector<unsigned char> hit(static_cast<std::size_t>(M), 0);
    parallel_for(hit.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng(seed, i);
            hit[i] = in_enlargement(x, sample(model, box, rng), r) ? 1 : 0;
        }
    });
    std::int64_t hits = 0;
    for (unsigned char h : hit) hits += h;
    return binomial(hits, M, 1.0);
}

PointEstimate delta_oplus(const ModelSpec& model, const Point& x, double r, std::int64_t M,
                          std::uint64_t seed, unsigned workers) {
    const PointEstimate p = hit_prob(model, x, r, M, seed, workers);
    const double scale = enlargement_norm(model, r);
    return PointEstimate{p.value / scale, p.std_error / scale, p.replicates};
}

PointEstimate delta_scale(const ModelSpec& model, const Point& x, double r, std::int64_t M,
                          std::uint64_t seed, unsigned workers) {
    check_inputs(r, M);
    const Window box = local_box(model, x);
    const double scale = ball_scale(model.d(), r);
    std::vector<double> y(static_cast<std::size_t>(M), 0.0);
    parallel_for(y.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng(seed, i);
            y[i] = measure_in_ball(sample(model, box, rng), x, r) / scale;
        }
    });
    return summarize(y);
}

// =============================================================================
// Region estimators
// =============================================================================

DensityField density_field(const ModelSpec& model, const EstimatorConfig& config, double r) {
    validate(config, model.d());
    check_inputs(r, config.replicates);
    const IntegratedPass pass = integrated_pass(model, config, {r}, false, true);
    const Grid grid = grid_on(config.region, config.grid_per_axis);
    DensityField field;
    field.region = config.region;
    field.shape = {static_cast<int>(grid.nx), static_cast<int>(grid.ny)};
    field.r = r;
    field.cells.resize(pass.cell_hits.size());
    const double scale = enlargement_norm(model, r);
    for (std::size_t c = 0; c < pass.cell_hits.size(); ++c) {
        field.cells[field_index(c, grid)] = binomial(pass.cell_hits[c], config.replicates, scale);
    }
    return field;
}

PointEstimate integrated_estimate(const ModelSpec& model, const EstimatorConfig& config, double r) {
    validate(config, model.d());
    check_inputs(r, config.replicates);
    return summarize(integrated_pass(model, config, {r}, false, false).values);
}

PointEstimate expected_measure_oracle(const ModelSpec& model, const Window& a, std::int64_t M,
                                      std::uint64_t seed, unsigned workers) {
    if (M < 1) throw std::invalid_argument("replicates: must be >= 1");
    std::vector<double> y(static_cast<std::size_t>(M), 0.0);
    parallel_for(y.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng(seed, i);
            y[i] = measure_in_window(sample(model, a, rng), a, kSolidResolution);
        }
    });
    return summarize(y);
}

PointEstimate expected_measure_oracle(const ModelSpec& model, const EstimatorConfig& config) {
    validate(config, model.d());
    const std::size_t M = static_cast<std::size_t>(config.replicates);
    const int solid_resolution = std::max(kSolidResolution, 4 * config.grid_per_axis);
    std::vector<double> y(M, 0.0);
    parallel_for(M, config.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng(config.seed, i);
            y[i] = measure_in_window(sample(model, config.clip, rng), config.region, solid_resolution);
        }
    });
    return summarize(y);
}

// =============================================================================
// Sweeps
// =============================================================================

SweepReport r_sweep(const ModelSpec& model, const EstimatorConfig& config, EstimatorKind kind) {
    validate(config, model.d());
    SweepReport report;
    report.model = model_name(model);
    report.kind = kind_name(kind);
    const std::size_t M = static_cast<std::size_t>(config.replicates);
    const std::size_t K = config.radii.size();
    const Point x = config.point.value_or(config.region.center());

    std::vector<PointEstimate> estimates(K);
    std::optional<double> reference;

    if (kind == EstimatorKind::Integrated) {
        reference = closed_form_measure(model, config.region);
        const IntegratedPass pass = integrated_pass(model, config, config.radii, !reference, false);
        for (std::size_t k = 0; k < K; ++k) estimates[k] = summarize(pass.values, K, k);
        if (!reference) reference = summarize(pass.oracle).value;
    } else {
        reference = closed_form_density(model, x);
        const Window box = local_box(model, x);
        std::vector<double> y(M * K, 0.0);
        parallel_for(M, config.workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                RngStream rng(config.seed, i);
                const RealizedSet s = sample(model, box, rng);
                if (kind == EstimatorKind::Oplus) {
                    const auto d = distance_to_set(x, s);
                    for (std::size_t k = 0; k < K; ++k) y[i * K + k] = d && *d <= config.radii[k] ? 1.0 : 0.0;
                } else {
                    for (std::size_t k = 0; k < K; ++k) {
                        y[i * K + k] = measure_in_ball(s, x, config.radii[k]) / ball_scale(model.d(), config.radii[k]);
                    }
                }
            }
        });
        for (std::size_t k = 0; k < K; ++k) {
            if (kind == EstimatorKind::Oplus) {
                std::int64_t hits = 0;
                for (std::size_t i = 0; i < M; ++i) hits += y[i * K + k] != 0.0 ? 1 : 0;
                estimates[k] = binomial(hits, config.replicates, enlargement_norm(model, config.radii[k]));
            } else {
                estimates[k] = summarize(y, K, k);
            }
        }
    }

    for (std::size_t k = 0; k < K; ++k) {
        SweepRow row;
        row.r = config.radii[k];
        row.estimate = estimates[k];
        row.reference = reference;
        if (reference) row.abs_error = std::fabs(estimates[k].value - *reference);
        report.rows.push_back(row);
    }
    return report;
}

// =============================================================================
// Factorization and covering checks
// =============================================================================

Prop9Record prop9_triple(const GrainUnionModel& model, const Point& x, double r, std::int64_t M,
                         std::uint64_t seed, unsigned workers) {
    check_inputs(r, M);
    const std::size_t m = static_cast<std::size_t>(M);
    const double expected_count = model.count.mean();
    // Grains are curves in the plane: n = 1, d = 2.
    const double scale = ball_scale(1, r);
    std::vector<double> theta(m), count(m), factored(m), overlap(m);
    parallel_for(m, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng(seed, i);
            const std::int64_t phi = model.count.sample(rng);
            std::int64_t hits = 0;
            bool first = false;
            for (std::int64_t k = 0; k < phi; ++k) {
                const bool hit = distance(x, model.grain.sample(rng)) <= r;
                hits += hit ? 1 : 0;
                if (k == 0) first = hit;
            }
            theta[i] = hits > 0 ? 1.0 / scale : 0.0;
            count[i] = static_cast<double>(hits) / scale;
            factored[i] = first ? expected_count / scale : 0.0;
            overlap[i] = hits >= 2 ? 1.0 / r : 0.0;
        }
    });
    return Prop9Record{summarize(theta), summarize(count), summarize(factored), summarize(overlap)};
}

CoveringCheck covering_bound_check(const RealizedSet& s, double r, int resolution) {
    if (s.n >= 2) throw std::invalid_argument("covering_bound_check: requires n < 2");
    if (!(r > 0.0 && r < 2.0)) throw std::invalid_argument("covering_bound_check: r must lie in (0, 2)");
    CoveringCheck out;
    const auto gamma = gamma_lower_bound(s);
    if (!gamma) {
        out.skipped = true;
        return out;
    }
    std::vector<Grain> clipped;
    for (const Grain& g : s.grains) {
        for (Grain& piece : clip_grain(g, s.valid_window)) clipped.push_back(std::move(piece));
    }
    const int d = s.valid_window.dim();
    const int n = s.n;
    const Window a = dilate_window(s.valid_window, r);
    const double norm = ball_scale(d - n, r);
    out.gamma = *gamma;
    out.lhs = enlargement_volume(clipped, a, r, resolution) / norm;
    out.quadrature_bound = quadrature_error_bound(clipped, a, r, resolution) / norm;
    out.rhs = std::ldexp(1.0, n + 2 * d) * unit_ball_volume(d) / unit_ball_volume(d - n) / out.gamma;
    out.ok = out.lhs <= out.rhs;
    return out;
}

}  // namespace mdens
