#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdens/estimators.hpp"
#include "mdens/processes.hpp"

// Run configuration: one JSON document per run. Parsing throws
// std::invalid_argument with the dotted field path and the violated
// constraint, e.g. "model.L: must be a finite value > 0 (got -1)".

namespace mdens {

struct Prop9Options {
    Point point = point2(0.5, 0.5);
    std::vector<double> radii{0.2, 0.1, 0.05};
    std::int64_t replicates = 20000;
};

struct CheckOptions {
    std::int64_t realizations = 200;
    std::vector<double> radii{0.05, 0.1, 0.5, 1.0};
    int resolution = 200;
    Window window = make_window(point2(0.0, 0.0), point2(1.0, 1.0));
    std::optional<Prop9Options> prop9;
};

struct ContentOptions {
    std::string fixture = "segment";
    std::vector<double> radii{0.2, 0.1, 0.05};
};

struct RunConfig {
    nlohmann::json document;  // effective document, flag overrides applied
    std::uint64_t seed = 0;
    std::optional<ModelSpec> model;
    std::optional<EstimatorConfig> estimator;
    EstimatorKind sweep_kind = EstimatorKind::Integrated;
    std::optional<double> field_r;
    ContentOptions content;
    CheckOptions check;
};

// Parses and validates the sections `command` needs (sweep, field, content,
// check). A run manifest is accepted in place of a config: its "config"
// member is used. `seed` overrides the document's seed.
RunConfig parse_config(nlohmann::json document, const std::string& command,
                       std::optional<std::uint64_t> seed = std::nullopt);

ModelSpec parse_model(const nlohmann::json& j, const std::string& path = "model");
nlohmann::json read_json_file(const std::string& path);

// Field reference printed by --help.
const char* config_reference();

}  // namespace mdens
