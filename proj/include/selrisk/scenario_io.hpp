#pragma once

#include <string>

#include <json.hpp>

#include "selrisk/engine.hpp"

namespace selrisk {

// Strict scenario-file parsing: unknown keys are rejected with the offending
// key path in the error.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
nlohmann::json scenario_to_json(const Scenario& scenario);

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

struct CsvRow {
    double x;
    double y;
};

// Finite rows of a boundary curve, ascending in x.
std::vector<CsvRow> curve_rows(const BoundaryCurve& curve);

std::string boundary_csv_text(const BoundaryCurve& curve);
void write_boundary_csv(const std::string& path, const BoundaryCurve& curve);

struct CompareRow {
    double x;
    bool has_oracle;
    double oracle_y;
    bool has_closed;
    double closed_y;
};

std::string compare_csv_text(const std::vector<CompareRow>& rows);
void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows);

// SVG 1.1 rendering of already-serialized CSV rows: two axis lines and one
// polyline, nothing computed independently.
std::string curve_svg_text(const std::vector<CsvRow>& rows, const Window& window);
void write_text_file(const std::string& path, const std::string& text);

} // namespace selrisk
