#include "mdens/reporting.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdens {

namespace {

constexpr const char* kCsvHeader = "r,estimate,stderr,reference,abs_error";

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path.string() + ": cannot open for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

double parse_number(const std::string& cell, const std::string& where) {
    if (cell.empty()) throw std::runtime_error(where + ": missing value");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || errno == ERANGE) {
        throw std::runtime_error(where + ": not a number: \"" + cell + "\"");
    }
    return v;
}

std::optional<double> parse_optional(const std::string& cell, const std::string& where) {
    if (cell.empty()) return std::nullopt;
    return parse_number(cell, where);
}

nlohmann::json coords(const Point& p) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < p.dim; ++i) a.push_back(p.coords[i]);
    return a;
}

Point point_from(const nlohmann::json& a) {
    if (!a.is_array() || a.empty() || a.size() > 2) throw std::runtime_error("expected 1 or 2 coordinates");
    return a.size() == 1 ? point1(a[0].get<double>()) : point2(a[0].get<double>(), a[1].get<double>());
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

// =============================================================================
// Sweep CSV
// =============================================================================

std::string format_sweep_csv(const SweepReport& report) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const SweepRow& row : report.rows) {
        out += g17(row.r) + ',' + g17(row.estimate.value) + ',' + g17(row.estimate.std_error) + ',';
        if (row.reference) out += g17(*row.reference);
        out += ',';
        if (row.abs_error) out += g17(*row.abs_error);
        out += '\n';
    }
    return out;
}

void write_sweep_csv(const SweepReport& report, const std::filesystem::path& path) {
    write_text(path, format_sweep_csv(report));
}

SweepReport parse_sweep_csv(const std::string& text, const std::string& source) {
    SweepReport report;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string where = source + ":" + std::to_string(number);
        if (number == 1) {
            if (line != kCsvHeader) throw std::runtime_error(where + ": expected header \"" + kCsvHeader + "\"");
            continue;
        }
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != 5) {
            throw std::runtime_error(where + ": expected 5 columns, found " + std::to_string(cells.size()));
        }
        SweepRow row;
        row.r = parse_number(cells[0], where + " (r)");
        row.estimate.value = parse_number(cells[1], where + " (estimate)");
        row.estimate.std_error = parse_number(cells[2], where + " (stderr)");
        row.reference = parse_optional(cells[3], where + " (reference)");
        row.abs_error = parse_optional(cells[4], where + " (abs_error)");
        report.rows.push_back(row);
    }
    if (number == 0) throw std::runtime_error(source + ":1: empty file, expected header");
    return report;
}

SweepReport read_sweep_csv(const std::filesystem::path& path) {
    return parse_sweep_csv(read_text(path), path.string());
}

// =============================================================================
// Density field JSON
// =============================================================================

nlohmann::json field_to_json(const DensityField& field) {
    nlohmann::json values = nlohmann::json::array();
    nlohmann::json errors = nlohmann::json::array();
    for (const PointEstimate& e : field.cells) {
        values.push_back(e.value);
        errors.push_back(e.std_error);
    }
    nlohmann::json shape = nlohmann::json::array({field.shape[0]});
    if (field.region.dim() == 2) shape.push_back(field.shape[1]);
    return {
        {"kind", "density_field"},
        {"label", "weak approximation: pointwise enlargement estimate, convergence proven only for integrals over regions"},
        {"region", {{"lo", coords(field.region.lo)}, {"hi", coords(field.region.hi)}}},
        {"shape", shape},
        {"r", field.r},
        {"replicates", field.cells.empty() ? 0 : field.cells.front().replicates},
        {"values", values},
        {"stderr", errors},
    };
}

DensityField field_from_json(const nlohmann::json& doc) {
    try {
        DensityField field;
        field.region = make_window(point_from(doc.at("region").at("lo")), point_from(doc.at("region").at("hi")));
        const auto& shape = doc.at("shape");
        field.shape = {shape.at(0).get<int>(), shape.size() > 1 ? shape.at(1).get<int>() : 1};
        field.r = doc.at("r").get<double>();
        const auto replicates = doc.at("replicates").get<std::int64_t>();
        const auto& values = doc.at("values");
        const auto& errors = doc.at("stderr");
        const std::size_t cells = static_cast<std::size_t>(field.shape[0]) * static_cast<std::size_t>(field.shape[1]);
        if (values.size() != cells || errors.size() != cells) {
            throw std::runtime_error("values and stderr must hold shape[0] * shape[1] entries");
        }
        for (std::size_t c = 0; c < cells; ++c) {
            field.cells.push_back(PointEstimate{values[c].get<double>(), errors[c].get<double>(), replicates});
        }
        return field;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed density field: ") + e.what());
    }
}

void write_field_json(const DensityField& field, const std::filesystem::path& path) {
    write_text(path, field_to_json(field).dump(2) + "\n");
}

DensityField read_field_json(const std::filesystem::path& path) {
    try {
        return field_from_json(nlohmann::json::parse(read_text(path)));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

// =============================================================================
// Manifest
// =============================================================================

nlohmann::json manifest_to_json(const RunManifest& manifest) {
    return {
        {"toolkit", "mdens"},
        {"version", kVersion},
        {"command", manifest.command},
        {"seed", manifest.seed},
        {"timestamp", manifest.timestamp},
        {"outputs", manifest.outputs},
        {"config", manifest.config},
    };
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    write_text(path, manifest_to_json(manifest).dump(2) + "\n");
}

}  // namespace mdens
