#include "zonoid/io.hpp"

#include "zonoid/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace zonoid::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    while (end && (*end == ' ' || *end == '\r')) ++end;
    if (end == begin || *end != '\0') throw ValidationError("not a number: '" + text + "'");
    return v;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && s[i] == ' ') ++i;
    return s.substr(i);
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ValidationError("csv: missing column '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[c]);
    return out;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (columns.size() != header.size()) throw ValidationError("csv: header and column counts differ");
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns) {
        if (col.size() != n) throw ValidationError("csv: ragged columns");
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c][r]);
        out << '\n';
    }
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("csv: empty input");
    for (auto& cell : split(trim(line))) table.header.push_back(trim(cell));
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) throw ValidationError("csv: ragged row '" + line + "'");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) row.push_back(parse_double(trim(cell)));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_calls_csv(std::ostream& out, const CallCurve& curve) {
    if (!curve.is_grid()) throw UnsupportedError("csv: closed-form curves must be sampled first");
    const auto k = curve.strikes();
    const auto c = curve.values();
    write_csv(out, {"K", "C"}, {{k.begin(), k.end()}, {c.begin(), c.end()}});
}

CallCurve read_calls_csv(std::istream& in, double mean) {
    const auto table = read_csv(in);
    return CallCurve::from_grid(table.values("K"), table.values("C"), mean);
}

void write_boundary_csv(std::ostream& out, const ZonoidBoundary& boundary) {
    if (!boundary.is_grid()) throw UnsupportedError("csv: closed-form boundaries must be sampled first");
    const auto p = boundary.probs();
    const auto v = boundary.values();
    write_csv(out, {"p", "Chat"}, {{p.begin(), p.end()}, {v.begin(), v.end()}});
}

ZonoidBoundary read_boundary_csv(std::istream& in, double mean) {
    const auto table = read_csv(in);
    return ZonoidBoundary::from_grid(table.values("p"), table.values("Chat"), mean);
}

void write_surface_csv(std::ostream& out, const SurfaceGrid& surface) {
    surface.validate();
    out << (surface.axis == SurfaceGrid::Axis::call_space ? "t\\K" : "t\\p");
    for (double x : surface.second_axis) out << ',' << format_double(x);
    out << '\n';
    for (std::size_t a = 0; a < surface.times.size(); ++a) {
        out << format_double(surface.times[a]);
        for (std::size_t j = 0; j < surface.second_axis.size(); ++j) out << ',' << format_double(surface.at(a, j));
        out << '\n';
    }
}

SurfaceGrid read_surface_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("surface csv: empty input");
    const auto head = split(trim(line));
    if (head.empty()) throw ValidationError("surface csv: missing header");
    SurfaceGrid s;
    const std::string corner = trim(head.front());
    if (corner == "t\\K") s.axis = SurfaceGrid::Axis::call_space;
    else if (corner == "t\\p") s.axis = SurfaceGrid::Axis::zonoid_space;
    else throw ValidationError("surface csv: unknown corner cell '" + corner + "'");
    for (std::size_t j = 1; j < head.size(); ++j) s.second_axis.push_back(parse_double(trim(head[j])));
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != head.size()) throw ValidationError("surface csv: ragged row");
        s.times.push_back(parse_double(trim(cells[0])));
        for (std::size_t j = 1; j < cells.size(); ++j) s.values.push_back(parse_double(trim(cells[j])));
    }
    s.validate();
    return s;
}

Json density_to_json(const DensityModel& density) {
    if (density.family() == DensityFamily::custom) throw UnsupportedError("json: custom densities are code-level only");
    return {{"family", to_string(density.family())}, {"location", density.location()}, {"scale", density.scale()}};
}

DensityModel density_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family")) throw ValidationError("density json: expected an object with 'family'");
    const auto family = density_family_from_string(j.at("family").get<std::string>());
    const double loc = j.value("location", 0.0);
    const double scale = j.value("scale", 1.0);
    switch (family) {
        case DensityFamily::gaussian: return DensityModel::gaussian(loc, scale);
        case DensityFamily::logistic: return DensityModel::logistic(loc, scale);
        case DensityFamily::cauchy: return DensityModel::cauchy(loc, scale);
        case DensityFamily::custom: break;
    }
    throw UnsupportedError("density json: custom densities are code-level only");
}

Json time_change_to_json(const TimeChange& y) { return {{"kind", y.name()}, {"scale", y.scale()}}; }

Json spec_to_json(const PeacockSpec& spec) {
    return {{"family", to_string(spec.family)},
            {"s", spec.s},
            {"density", density_to_json(spec.density)},
            {"time_change", time_change_to_json(spec.time_change)}};
}

Json envelope(double mean, Json provenance, Json data) {
    return {{"mean", mean}, {"provenance", std::move(provenance)}, {"data", std::move(data)}};
}

}  // namespace zonoid::io
