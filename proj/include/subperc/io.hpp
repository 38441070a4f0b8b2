#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "subperc/errors.hpp"
#include "subperc/geometry.hpp"
#include "subperc/percolation.hpp"
#include "subperc/point_process.hpp"
#include "subperc/site_field.hpp"
#include "subperc/spatial_graph.hpp"

#include "json.hpp"

namespace subperc {

/// Shortest round-trip decimal form of a double; deterministic, so repeated
/// runs emit byte-identical files.
inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc())
        throw IoError("fmt_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path.string());
    return out;
}

/// Pattern CSV: header `x,y`, one point per line.
inline void write_pattern_csv(const PointPattern& pattern, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "x,y\n";
    for (const Point& p : pattern.points) out << fmt_double(p.x) << ',' << fmt_double(p.y) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

inline nlohmann::json window_to_json(const Window& w) {
    return {{"x_min", w.x_min}, {"x_max", w.x_max}, {"y_min", w.y_min},
            {"y_max", w.y_max}, {"boundary_mode", to_string(w.mode)}};
}

/// Sidecar metadata for a pattern CSV: window, generator descriptor, seed.
inline void write_pattern_sidecar(const PointPattern& pattern, const std::filesystem::path& path) {
    nlohmann::json j;
    j["window"] = window_to_json(pattern.window);
    j["generator"] = pattern.provenance.descriptor;
    j["seed"] = pattern.provenance.seed;
    j["point_count"] = pattern.points.size();
    std::ofstream out = open_output(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

/// Graph export: edge-list CSV `i,j`.
inline void write_edges_csv(const SpatialGraph& g, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "i,j\n";
    for (const auto& [i, j] : g.edges) out << i << ',' << j << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

/// Component export: CSV `node,component`.
inline void write_components_csv(const ComponentStats& stats, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "node,component\n";
    for (std::size_t v = 0; v < stats.labels.size(); ++v) out << v << ',' << stats.labels[v] << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

/// Scan trace CSV `param,mean_fraction,std,replications`.
inline void write_scan_csv(const ScanResult& result, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "param,mean_fraction,std,replications\n";
    for (const ScanStep& s : result.per_step)
        out << fmt_double(s.param) << ',' << fmt_double(s.mean_fraction) << ',' << fmt_double(s.std_dev)
            << ',' << result.config.replications << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

/// Scan summary JSON with the threshold and the seeds that produced it.
inline void write_scan_summary_json(const ScanResult& result, const std::filesystem::path& path) {
    nlohmann::json j;
    j["threshold"] = result.threshold;
    j["target_fraction"] = result.config.target_fraction;
    j["tolerance"] = result.config.tolerance;
    j["bracket"] = {result.config.bracket_lo, result.config.bracket_hi};
    j["replications"] = result.config.replications;
    j["seeds"] = result.config.seeds;
    j["metric"] = to_string(result.config.metric);
    std::ofstream out = open_output(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

/// Interference grid CSV `x,y,I`.
inline void write_field_grid_csv(const FieldGrid& grid, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "x,y,I\n";
    for (std::int64_t iy = 0; iy < grid.ny; ++iy) {
        for (std::int64_t ix = 0; ix < grid.nx; ++ix) {
            const Point c = grid.cell_center(ix, iy);
            out << fmt_double(c.x) << ',' << fmt_double(c.y) << ',' << fmt_double(grid.at(ix, iy)) << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

/// One row of the diagnostics report.
struct DiagnosticRow {
    std::string diagnostic;
    std::string params;
    double value = 0.0;
    double std_error = 0.0;
    double reference_value = 0.0;
    bool pass = false;
};

inline void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows,
                                  const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "diagnostic,params,value,std_error,reference_value,verdict\n";
    for (const DiagnosticRow& r : rows)
        out << r.diagnostic << ',' << r.params << ',' << fmt_double(r.value) << ','
            << fmt_double(r.std_error) << ',' << fmt_double(r.reference_value) << ','
            << (r.pass ? "pass" : "fail") << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace subperc
