#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdens/estimators.hpp"

// On-disk formats: sweeps as CSV, density fields and run manifests as JSON.

namespace mdens {

inline constexpr const char* kVersion = "0.1.0";

// Header `r,estimate,stderr,reference,abs_error`; 17 significant digits;
// absent reference / abs_error are empty cells.
std::string format_sweep_csv(const SweepReport& report);
void write_sweep_csv(const SweepReport& report, const std::filesystem::path& path);

// Inverse of write_sweep_csv. Errors name the source and line number. The
// replicates column is not stored, so it reads back as 0.
SweepReport parse_sweep_csv(const std::string& text, const std::string& source = "<string>");
SweepReport read_sweep_csv(const std::filesystem::path& path);

nlohmann::json field_to_json(const DensityField& field);
DensityField field_from_json(const nlohmann::json& doc);
void write_field_json(const DensityField& field, const std::filesystem::path& path);
DensityField read_field_json(const std::filesystem::path& path);

struct RunManifest {
    std::string command;
    nlohmann::json config;  // full effective config, flags applied
    std::uint64_t seed = 0;
    std::string timestamp;  // UTC, ISO 8601
    std::vector<std::string> outputs;
};

// The config echo can be fed back through --config to replay the run.
nlohmann::json manifest_to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

// Writes text to path, throwing std::runtime_error with the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mdens
