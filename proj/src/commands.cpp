#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "mdens/cli.hpp"
#include "mdens/config.hpp"
#include "mdens/estimators.hpp"
#include "mdens/mincontent.hpp"
#include "mdens/parallel.hpp"
#include "mdens/reporting.hpp"

namespace mdens {

namespace {

using nlohmann::json;

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void finish_run(const std::string& command, const RunConfig& rc, const std::filesystem::path& out,
                std::vector<std::string> outputs, std::ostream& log) {
    outputs.push_back("manifest.json");
    RunManifest manifest{command, rc.document, rc.seed, utc_now(), outputs};
    write_manifest(manifest, out / "manifest.json");
    for (const std::string& name : outputs) log << "wrote " << (out / name).string() << "\n";
}

json estimate_json(const PointEstimate& e) {
    return {{"value", e.value}, {"stderr", e.std_error}, {"replicates", e.replicates}};
}

double z_score(const PointEstimate& a, const PointEstimate& b) {
    const double s = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    const double diff = std::fabs(a.value - b.value);
    if (s == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / s;
}

int cmd_sweep(const RunConfig& rc, const CommandOptions& opt, std::ostream& log) {
    EstimatorConfig est = *rc.estimator;
    est.workers = opt.workers;
    const SweepReport report = r_sweep(*rc.model, est, rc.sweep_kind);
    write_sweep_csv(report, opt.out / "sweep.csv");
    finish_run("sweep", rc, opt.out, {"sweep.csv"}, log);
    return kExitOk;
}

int cmd_field(const RunConfig& rc, const CommandOptions& opt, std::ostream& log) {
    EstimatorConfig est = *rc.estimator;
    est.workers = opt.workers;
    const DensityField field = density_field(*rc.model, est, *rc.field_r);
    write_field_json(field, opt.out / "field.json");
    finish_run("field", rc, opt.out, {"field.json"}, log);
    return kExitOk;
}

int cmd_content(const RunConfig& rc, const CommandOptions& opt, std::ostream& log) {
    const Fixture& f = fixture(rc.content.fixture);
    const SweepReport report = content_sweep(f.set, f.a, rc.content.radii, opt.workers);
    write_sweep_csv(report, opt.out / "content.csv");
    finish_run("content", rc, opt.out, {"content.csv"}, log);
    return kExitOk;
}

int cmd_check(const RunConfig& rc, const CommandOptions& opt, std::ostream& log) {
    const ModelSpec& model = *rc.model;
    const CheckOptions& c = rc.check;
    const std::size_t N = static_cast<std::size_t>(c.realizations);
    const std::size_t K = c.radii.size();

    std::vector<CoveringCheck> checks(N * K);
    parallel_for(N, opt.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng(rc.seed, i);
            const RealizedSet s = sample(model, c.window, rng);
            for (std::size_t k = 0; k < K; ++k) checks[i * K + k] = covering_bound_check(s, c.radii[k], c.resolution);
        }
    });

    std::size_t failures = 0;
    std::size_t skipped = 0;
    double worst = 0.0;
    json rows = json::array();
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            const CoveringCheck& ch = checks[i * K + k];
            if (ch.skipped) {
                ++skipped;
                continue;
            }
            if (!ch.ok) ++failures;
            worst = std::max(worst, ch.lhs / ch.rhs);
            rows.push_back({{"realization", i}, {"r", c.radii[k]}, {"lhs", ch.lhs}, {"rhs", ch.rhs},
                            {"gamma", ch.gamma}, {"quadrature_bound", ch.quadrature_bound}, {"ok", ch.ok}});
        }
    }
    json doc = {
        {"covering",
         {{"realizations", N}, {"radii", c.radii}, {"resolution", c.resolution}, {"checked", rows.size()},
          {"skipped", skipped}, {"failures", failures}, {"max_lhs_over_rhs", worst}, {"rows", rows}}},
    };
    log << "covering bound: " << rows.size() << " checks, " << failures << " failures, " << skipped
        << " skipped (empty)\n";

    const auto* union_model = std::get_if<GrainUnionModel>(&model.kind);
    if (c.prop9 && union_model) {
        json triples = json::array();
        std::vector<double> overlaps;
        for (double r : c.prop9->radii) {
            const Prop9Record t = prop9_triple(*union_model, c.prop9->point, r, c.prop9->replicates, rc.seed, opt.workers);
            const double z = std::max({z_score(t.theta_ratio, t.count_ratio), z_score(t.theta_ratio, t.factored_ratio),
                                       z_score(t.count_ratio, t.factored_ratio)});
            overlaps.push_back(t.overlap_ratio.value);
            triples.push_back({{"r", r},
                               {"theta_ratio", estimate_json(t.theta_ratio)},
                               {"count_ratio", estimate_json(t.count_ratio)},
                               {"factored_ratio", estimate_json(t.factored_ratio)},
                               {"overlap_ratio", estimate_json(t.overlap_ratio)},
                               {"max_pairwise_z", z},
                               {"agree_within_4_stderr", z <= 4.0}});
        }
        bool decreasing = true;
        for (std::size_t k = 1; k < overlaps.size(); ++k) decreasing = decreasing && overlaps[k] < overlaps[k - 1];
        doc["prop9"] = {{"point", {c.prop9->point.x(), c.prop9->point.y()}}, {"rows", triples},
                        {"overlap_decreasing", decreasing}};
        log << "factorization triples: " << triples.size() << " radii, overlap decreasing: "
            << (decreasing ? "yes" : "no") << "\n";
    } else if (c.prop9) {
        doc["prop9"] = {{"skipped", "model is not a grain_union"}};
    }

    write_text(opt.out / "check.json", doc.dump(2) + "\n");
    finish_run("check", rc, opt.out, {"check.json"}, log);
    return failures == 0 ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int run_command(const CommandOptions& options, std::ostream& log, std::ostream& err) {
    RunConfig rc;
    try {
        if (options.workers < 1) throw std::invalid_argument("--workers: must be >= 1");
        rc = parse_config(read_json_file(options.config_path), options.command, options.seed);
    } catch (const std::invalid_argument& e) {
        err << "invalid config: " << e.what() << "\n";
        return kExitValidation;
    }
    try {
        std::filesystem::create_directories(options.out);
        if (options.command == "sweep") return cmd_sweep(rc, options, log);
        if (options.command == "field") return cmd_field(rc, options, log);
        if (options.command == "content") return cmd_content(rc, options, log);
        if (options.command == "check") return cmd_check(rc, options, log);
        err << "unknown command: " << options.command << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        err << "invalid config: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Minkowski-enlargement estimators of mean densities of random closed sets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    const std::pair<const char*, const char*> commands[] = {
        {"sweep", "estimate the density along estimator.radii; writes sweep.csv"},
        {"field", "pointwise density field over estimator.region; writes field.json"},
        {"content", "Minkowski content of a catalogue fixture; writes content.csv"},
        {"check", "covering-bound and factorization property suites; writes check.json"},
    };
    CommandOptions options;
    std::uint64_t seed = 0;
    struct Parsed {
        CLI::App* sub;
        CLI::Option* seed;
    };
    std::vector<Parsed> subs;
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->footer(config_reference());
        sub->add_option("--config", options.config_path, "JSON config file or run manifest")->required();
        CLI::Option* seed_opt = sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--workers", options.workers, "worker threads; outputs do not depend on it")
            ->check(CLI::Range(1u, 4096u));
        sub->add_option("--out", options.out, "output directory")->capture_default_str();
        subs.push_back({sub, seed_opt});
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }
    for (const Parsed& p : subs) {
        if (!app.got_subcommand(p.sub)) continue;
        options.command = p.sub->get_name();
        if (p.seed->count() > 0) options.seed = seed;
    }
    return run_command(options, std::cout, std::cerr);
}

}  // namespace mdens
