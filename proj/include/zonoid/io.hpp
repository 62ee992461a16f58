#pragma once

#include "zonoid/density.hpp"
#include "zonoid/duality.hpp"
#include "zonoid/peacock.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace zonoid::io {

using Json = nlohmann::json;

/// Shortest-safe text for a double: 17 significant digits, so parsing it back
/// gives the same bits.
std::string format_double(double x);
double parse_double(const std::string& text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header column; throws ValidationError if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
/// Numeric CSV with one header row. Throws ValidationError on ragged rows or
/// non-numeric cells.
CsvTable read_csv(std::istream& in);

/// `K,C` rows.
void write_calls_csv(std::ostream& out, const CallCurve& curve);
CallCurve read_calls_csv(std::istream& in, double mean);

/// `p,Chat` rows.
void write_boundary_csv(std::ostream& out, const ZonoidBoundary& boundary);
ZonoidBoundary read_boundary_csv(std::istream& in, double mean);

/// Matrix layout: the first row holds the second-axis values after a corner
/// cell `t\K` or `t\p`; each following row starts with its time.
void write_surface_csv(std::ostream& out, const SurfaceGrid& surface);
SurfaceGrid read_surface_csv(std::istream& in);

/// {"family", "location", "scale"}; custom densities cannot be serialised.
Json density_to_json(const DensityModel& density);
DensityModel density_from_json(const Json& j);

Json time_change_to_json(const TimeChange& y);
Json spec_to_json(const PeacockSpec& spec);

/// {"mean": m, "provenance": {...}, "data": {...}}.
Json envelope(double mean, Json provenance, Json data = Json::object());

}  // namespace zonoid::io
