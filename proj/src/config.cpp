#include "mdens/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mdens {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& constraint) {
    throw std::invalid_argument(path + ": " + constraint);
}

// Object reader that reports the dotted path of every problem and rejects
// keys nobody asked for.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) bad(path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const json& get(const std::string& key) {
        if (!j_.contains(key)) bad(at(key), "required field is missing");
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = get(key);
        if (!v.is_number()) bad(at(key), "expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::int64_t integer(const std::string& key) {
        const json& v = get(key);
        if (!v.is_number_integer()) bad(at(key), "expected an integer");
        return v.get<std::int64_t>();
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) { return has(key) ? integer(key) : fallback; }

    std::uint64_t unsigned_integer(const std::string& key) {
        const json& v = get(key);
        if (!v.is_number_unsigned()) bad(at(key), "expected a non-negative 64-bit integer");
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string& key) {
        const json& v = get(key);
        if (!v.is_string()) bad(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }

    std::vector<double> numbers(const std::string& key) {
        const json& v = get(key);
        if (!v.is_array()) bad(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (const json& e : v) {
            if (!e.is_number()) bad(at(key), "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    Point point(const std::string& key) {
        const std::vector<double> c = numbers(key);
        if (c.size() == 1) return point1(c[0]);
        if (c.size() == 2) return point2(c[0], c[1]);
        bad(at(key), "expected 1 or 2 coordinates");
    }

    Window window(const std::string& key) {
        Obj w(get(key), at(key));
        const Point lo = w.point("lo");
        const Point hi = w.point("hi");
        w.finish();
        if (lo.dim != hi.dim) bad(at(key), "lo and hi must have the same dimension");
        for (int i = 0; i < lo.dim; ++i) {
            if (!(lo.coords[i] < hi.coords[i])) bad(at(key), "requires lo < hi componentwise");
        }
        return Window{lo, hi};
    }

    // Box given inline as "lo"/"hi" members of this object.
    Window inline_window() {
        const Point lo = point("lo");
        const Point hi = point("hi");
        if (lo.dim != hi.dim) bad(path_, "lo and hi must have the same dimension");
        for (int i = 0; i < lo.dim; ++i) {
            if (!(lo.coords[i] < hi.coords[i])) bad(path_, "requires lo < hi componentwise");
        }
        return Window{lo, hi};
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!used_.count(item.key())) bad(at(item.key()), "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

DensitySpec parse_density(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string type = o.text("type");
    DensitySpec d;
    if (type == "uniform") {
        d.kind = UniformBox{o.inline_window()};
    } else if (type == "affine_x") {
        d.kind = AffineX{o.inline_window(), o.number("c")};
    } else if (type == "gaussian") {
        const Window box = o.inline_window();
        d.kind = GaussianTruncated{o.point("mean"), o.number("sigma"), box};
    } else {
        bad(o.at("type"), "must be one of uniform, affine_x, gaussian (got \"" + type + "\")");
    }
    o.finish();
    return d;
}

LengthLaw parse_length(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string type = o.text("type");
    LengthLaw law;
    if (type == "fixed") {
        law.kind = FixedLength{o.number("length")};
    } else if (type == "uniform") {
        law.kind = UniformLength{o.number("lo"), o.number("hi")};
    } else {
        bad(o.at("type"), "must be one of fixed, uniform (got \"" + type + "\")");
    }
    o.finish();
    return law;
}

CountLaw parse_count(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string type = o.text("type");
    CountLaw law;
    if (type == "deterministic") {
        law.kind = Deterministic{o.integer("k")};
    } else if (type == "geometric") {
        law.kind = GeometricOnPositives{o.number("p")};
    } else if (type == "one_plus_poisson") {
        law.kind = OnePlusPoisson{o.number("mean")};
    } else {
        bad(o.at("type"), "must be one of deterministic, geometric, one_plus_poisson (got \"" + type + "\")");
    }
    o.finish();
    return law;
}

GrainLaw parse_grain(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string type = o.text("type");
    GrainLaw law;
    if (type == "segment") {
        law.kind = SegmentLaw{parse_density(o.get("center"), o.at("center")), parse_length(o.get("length"), o.at("length"))};
    } else if (type == "circle") {
        law.kind = CircleLaw{parse_density(o.get("center"), o.at("center")), o.number("radius")};
    } else {
        bad(o.at("type"), "must be one of segment, circle (got \"" + type + "\")");
    }
    o.finish();
    return law;
}

std::vector<double> parse_radii(Obj& o, const std::string& key, double max_r, const char* regime) {
    const std::vector<double> radii = o.numbers(key);
    if (radii.empty()) bad(o.at(key), "must list at least one radius");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0 && radii[k] <= max_r)) {
            std::ostringstream os;
            os << "each r must lie in " << regime << " (got " << radii[k] << ")";
            bad(o.at(key), os.str());
        }
        if (k > 0 && !(radii[k] < radii[k - 1])) bad(o.at(key), "must be strictly descending");
    }
    return radii;
}

EstimatorConfig parse_estimator(const json& j, int dim, std::uint64_t seed, bool need_radii) {
    Obj o(j, "estimator");
    EstimatorConfig c;
    c.seed = seed;
    if (need_radii || o.has("radii")) {
        c.radii = parse_radii(o, "radii", 1.0, "(0, 1], the small-radius regime where the density bound holds");
    }
    c.replicates = o.integer("replicates", 1000);
    if (c.replicates < 1) bad(o.at("replicates"), "must be >= 1");
    const std::int64_t grid = o.integer("grid_per_axis", 32);
    if (grid < 1 || grid > 100000) bad(o.at("grid_per_axis"), "must lie in [1, 100000]");
    c.grid_per_axis = static_cast<int>(grid);
    c.region = o.window("region");
    c.clip = o.has("clip") ? o.window("clip") : dilate_window(c.region, 0.5);
    if (o.has("point")) c.point = o.point("point");
    o.finish();
    if (!need_radii && c.radii.empty()) c.radii = {1.0};
    validate(c, dim);
    return c;
}

}  // namespace

ModelSpec parse_model(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string type = o.text("type");
    ModelSpec m;
    if (type == "random_point") {
        m.kind = RandomPointModel{parse_density(o.get("density"), o.at("density"))};
    } else if (type == "grain_union") {
        m.kind = GrainUnionModel{parse_count(o.get("count"), o.at("count")), parse_grain(o.get("grain"), o.at("grain"))};
    } else if (type == "poisson_line") {
        m.kind = PoissonLineModel{o.number("L")};
    } else if (type == "poisson_segment") {
        m.kind = PoissonSegmentModel{o.number("center_intensity"), parse_length(o.get("length"), o.at("length"))};
    } else if (type == "birth_growth") {
        BirthGrowthModel bg;
        Obj nuc(o.get("nucleation"), o.at("nucleation"));
        const std::string rate = nuc.text("type");
        if (rate == "constant") {
            bg.nucleation = ConstantRate{nuc.number("a")};
        } else if (rate == "affine") {
            bg.nucleation = AffineRate{nuc.number("a"), nuc.number("c")};
        } else {
            bad(nuc.at("type"), "must be one of constant, affine (got \"" + rate + "\")");
        }
        nuc.finish();
        bg.G = o.number("G");
        bg.t = o.number("t");
        const std::string target = o.text("target", "boundary");
        if (target == "boundary") {
            bg.target = GrowthTarget::Boundary;
        } else if (target == "solid") {
            bg.target = GrowthTarget::Solid;
        } else {
            bad(o.at("target"), "must be one of boundary, solid (got \"" + target + "\")");
        }
        m.kind = bg;
    } else {
        bad(o.at("type"),
            "must be one of random_point, grain_union, poisson_line, poisson_segment, birth_growth (got \"" + type + "\")");
    }
    o.finish();
    try {
        validate(m);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + "." + e.what());
    }
    return m;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("--config: cannot open \"" + path + "\"");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("--config: \"" + path + "\" is not valid JSON: " + e.what());
    }
}

RunConfig parse_config(json document, const std::string& command, std::optional<std::uint64_t> seed) {
    if (document.is_object() && document.contains("toolkit") && document.contains("config")) {
        json inner = document.at("config");
        document = std::move(inner);
    }
    if (seed && document.is_object()) document["seed"] = *seed;
    RunConfig rc;
    Obj top(document, "config");
    if (top.has("seed")) rc.seed = top.unsigned_integer("seed");

    const bool needs_model = command == "sweep" || command == "field" || command == "check";
    if (needs_model) rc.model = parse_model(top.get("model"));
    else if (top.has("model")) top.get("model");

    if (command == "sweep" || command == "field") {
        const bool sweep = command == "sweep";
        rc.estimator = parse_estimator(top.get("estimator"), rc.model->d(), rc.seed, sweep);
    } else if (top.has("estimator")) {
        top.get("estimator");
    }

    if (top.has("sweep")) {
        Obj s(top.get("sweep"), "sweep");
        rc.sweep_kind = parse_kind(s.text("kind", "integrated"));
        s.finish();
    }
    if (top.has("field")) {
        Obj f(top.get("field"), "field");
        if (f.has("r")) {
            const double r = f.number("r");
            if (!(r > 0.0 && r <= 1.0)) bad(f.at("r"), "must lie in (0, 1]");
            rc.field_r = r;
        }
        f.finish();
    }
    if (command == "field" && !rc.field_r) {
        if (!top.has("estimator") || !document.at("estimator").contains("radii")) {
            bad("field.r", "required field is missing (or give estimator.radii)");
        }
        rc.field_r = rc.estimator->radii.front();
    }
    if (top.has("content")) {
        Obj c(top.get("content"), "content");
        rc.content.fixture = c.text("fixture", rc.content.fixture);
        if (c.has("radii")) rc.content.radii = parse_radii(c, "radii", 1.0, "(0, 1]");
        c.finish();
    }
    if (top.has("check")) {
        Obj c(top.get("check"), "check");
        rc.check.realizations = c.integer("realizations", rc.check.realizations);
        if (rc.check.realizations < 1) bad(c.at("realizations"), "must be >= 1");
        if (c.has("radii")) {
            rc.check.radii = c.numbers("radii");
            for (double r : rc.check.radii) {
                if (!(r > 0.0 && r < 2.0)) bad(c.at("radii"), "each r must lie in (0, 2)");
            }
        }
        const std::int64_t res = c.integer("resolution", rc.check.resolution);
        if (res < 8 || res > 100000) bad(c.at("resolution"), "must lie in [8, 100000]");
        rc.check.resolution = static_cast<int>(res);
        if (c.has("window")) rc.check.window = c.window("window");
        if (c.has("prop9")) {
            Obj p(c.get("prop9"), c.at("prop9"));
            Prop9Options opt;
            if (p.has("point")) opt.point = p.point("point");
            if (p.has("radii")) opt.radii = parse_radii(p, "radii", 1.0, "(0, 1]");
            opt.replicates = p.integer("replicates", opt.replicates);
            if (opt.replicates < 1) bad(p.at("replicates"), "must be >= 1");
            p.finish();
            rc.check.prop9 = opt;
        }
        c.finish();
    }
    if (command == "check" && rc.model) {
        if (rc.model->n() >= 2) bad("model", "check requires a model with n < 2 (use target \"boundary\")");
        if (rc.check.window.dim() != rc.model->d()) bad("check.window", "dimension must match the model");
        if (rc.check.prop9 && rc.check.prop9->point.dim != 2) bad("check.prop9.point", "expected 2 coordinates");
    }
    top.finish();
    rc.document = std::move(document);
    rc.document["seed"] = rc.seed;
    return rc;
}

const char* config_reference() {
    return R"(Config file: one JSON object. Unknown fields are rejected.

  seed                     non-negative 64-bit integer (default 0; --seed overrides)
  model.type               random_point | grain_union | poisson_line | poisson_segment | birth_growth
    random_point:    density (see DENSITY)
    grain_union:     count (see COUNT), grain (see GRAIN)
    poisson_line:    L > 0 (length per unit area)
    poisson_segment: center_intensity > 0, length (see LENGTH)
    birth_growth:    nucleation {type: constant, a >= 0} | {type: affine, a >= 0, c},
                     G > 0, t > 0, target: boundary | solid (default boundary)
  DENSITY  {type: uniform, lo, hi} | {type: affine_x, lo, hi, c} with |c| * half-width <= 1
           | {type: gaussian, lo, hi, mean, sigma > 0}; lo/hi are 1 or 2 coordinates, lo < hi
  COUNT    {type: deterministic, k >= 1} | {type: geometric, p in (0, 1)}
           | {type: one_plus_poisson, mean >= 0}
  GRAIN    {type: segment, center: DENSITY, length: LENGTH} | {type: circle, center: DENSITY, radius > 0}
  LENGTH   {type: fixed, length > 0} | {type: uniform, lo > 0, hi > lo}

  estimator.radii          strictly descending, each in (0, 1] (sweep: required)
  estimator.replicates     M >= 1 (default 1000)
  estimator.grid_per_axis  midpoint cells per axis of region (default 32)
  estimator.region         {lo, hi}, the region A (required for sweep and field)
  estimator.clip           {lo, hi}, sampling window W with A strictly inside (default A dilated by 0.5)
  estimator.point          query point of the oplus/scale sweeps (default: center of A)
  sweep.kind               oplus | scale | integrated (default integrated)
  field.r                  radius in (0, 1] (default: first estimator radius)
  content.fixture          segment | circle | clipped_segment | polyline | disjoint_segments | point | edge_aligned
  content.radii            strictly descending, each in (0, 1] (default [0.2, 0.1, 0.05])
  check.realizations       number of sampled realizations (default 200)
  check.radii              each in (0, 2) (default [0.05, 0.1, 0.5, 1.0])
  check.resolution         quadrature cells per axis, >= 8 (default 200)
  check.window             {lo, hi} sampling window (default [0,1]^2)
  check.prop9              optional {point, radii, replicates}; grain_union models only
)";
}

}  // namespace mdens
