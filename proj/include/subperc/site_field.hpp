#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "subperc/errors.hpp"
#include "subperc/geometry.hpp"
#include "subperc/point_process.hpp"
#include "subperc/spatial_graph.hpp"

namespace subperc {

/// Binary site states over a block of the integer lattice scaled by `cell`.
/// Cell (ix, iy) is the box of side `cell` centered at
/// (cx0 + ix*cell, cy0 + iy*cell). Adjacency between sites includes
/// diagonals (closed boxes of 8-neighbors intersect).
struct SiteField {
    double cell = 1.0;
    double cx0 = 0.0;  // center of cell (0, 0)
    double cy0 = 0.0;
    std::int64_t nx = 0;
    std::int64_t ny = 0;
    std::vector<std::uint8_t> open;

    bool is_open(std::int64_t ix, std::int64_t iy) const {
        return ix >= 0 && ix < nx && iy >= 0 && iy < ny &&
               open[static_cast<std::size_t>(iy * nx + ix)] != 0;
    }

    void set_open(std::int64_t ix, std::int64_t iy) {
        if (ix >= 0 && ix < nx && iy >= 0 && iy < ny)
            open[static_cast<std::size_t>(iy * nx + ix)] = 1;
    }

    double cell_left(std::int64_t ix) const { return cx0 + static_cast<double>(ix) * cell - cell / 2.0; }
    double cell_right(std::int64_t ix) const { return cx0 + static_cast<double>(ix) * cell + cell / 2.0; }

    std::size_t open_count() const {
        std::size_t n = 0;
        for (auto b : open) n += b;
        return n;
    }
};

namespace detail {

/// Integer index z of the half-open box (r z - r/2, r z + r/2] containing x.
inline std::int64_t site_of(double x, double r) {
    return static_cast<std::int64_t>(std::ceil(x / r - 0.5));
}

}  // namespace detail

/// Site-percolation field induced by a pattern: site z opens when the r-box
/// centered at r z holds at least one pattern point. Boxes live on the
/// absolute lattice r*Z^2; the grid covers the pattern window.
inline SiteField site_percolation_field(const PointPattern& pattern, double r) {
    if (!(r > 0.0)) throw ParameterError("site field: cell size must be positive");
    const Window& w = pattern.window;
    SiteField f;
    f.cell = r;
    const std::int64_t zx_lo = detail::site_of(w.x_min, r);
    const std::int64_t zx_hi = detail::site_of(w.x_max, r);
    const std::int64_t zy_lo = detail::site_of(w.y_min, r);
    const std::int64_t zy_hi = detail::site_of(w.y_max, r);
    f.cx0 = static_cast<double>(zx_lo) * r;
    f.cy0 = static_cast<double>(zy_lo) * r;
    f.nx = zx_hi - zx_lo + 1;
    f.ny = zy_hi - zy_lo + 1;
    f.open.assign(static_cast<std::size_t>(f.nx * f.ny), 0);
    for (const Point& p : pattern.points)
        f.set_open(detail::site_of(p.x, r) - zx_lo, detail::site_of(p.y, r) - zy_lo);
    return f;
}

/// Left-right crossing of the open set under 8-adjacency. A site touches the
/// left boundary when its closed cell meets [x_min, x_min + touch_band], and
/// symmetrically on the right; with the default band 0 this is the column
/// containing the boundary. Crossing means one open cluster touches both.
inline bool crossing_exists(const SiteField& f, const Window& w, double touch_band = 0.0) {
    const std::size_t n = static_cast<std::size_t>(f.nx * f.ny);
    if (n == 0) return false;
    UnionFind uf(n);
    auto idx = [&](std::int64_t ix, std::int64_t iy) { return static_cast<std::uint32_t>(iy * f.nx + ix); };
    for (std::int64_t iy = 0; iy < f.ny; ++iy) {
        for (std::int64_t ix = 0; ix < f.nx; ++ix) {
            if (!f.is_open(ix, iy)) continue;
            // forward half of the 8-neighborhood
            if (f.is_open(ix + 1, iy)) uf.unite(idx(ix, iy), idx(ix + 1, iy));
            if (f.is_open(ix - 1, iy + 1)) uf.unite(idx(ix, iy), idx(ix - 1, iy + 1));
            if (f.is_open(ix, iy + 1)) uf.unite(idx(ix, iy), idx(ix, iy + 1));
            if (f.is_open(ix + 1, iy + 1)) uf.unite(idx(ix, iy), idx(ix + 1, iy + 1));
        }
    }
    // slack absorbs accumulated roundoff in cell edges; it is orders of
    // magnitude below the geometric margins of the discretization sandwich
    const double eps = 1e-9 * f.cell;
    std::vector<std::uint8_t> touches_left(n, 0), touches_right(n, 0);
    bool any = false;
    for (std::int64_t iy = 0; iy < f.ny; ++iy) {
        for (std::int64_t ix = 0; ix < f.nx; ++ix) {
            if (!f.is_open(ix, iy)) continue;
            const std::uint32_t root = uf.find(idx(ix, iy));
            if (f.cell_left(ix) <= w.x_min + touch_band + eps && f.cell_right(ix) >= w.x_min - eps)
                touches_left[root] = 1;
            if (f.cell_right(ix) >= w.x_max - touch_band - eps && f.cell_left(ix) <= w.x_max + eps)
                touches_right[root] = 1;
            if (touches_left[root] && touches_right[root]) any = true;
        }
    }
    return any;
}

/// Left-right crossing of a geometric graph: some component owns a node
/// within touch_tol of the left boundary and one within touch_tol of the
/// right boundary (balls of radius touch_tol reach the window edges).
inline bool crossing_exists(const SpatialGraph& g, const PointPattern& pattern, double touch_tol) {
    if (g.node_count == 0) return false;
    const Window& w = pattern.window;
    UnionFind uf(g.node_count);
    for (const auto& [i, j] : g.edges) uf.unite(i, j);
    std::vector<std::uint8_t> left(g.node_count, 0), right(g.node_count, 0);
    for (std::uint32_t v = 0; v < g.node_count; ++v) {
        const std::uint32_t root = uf.find(v);
        if (pattern.points[v].x <= w.x_min + touch_tol) left[root] = 1;
        if (pattern.points[v].x >= w.x_max - touch_tol) right[root] = 1;
    }
    for (std::uint32_t v = 0; v < g.node_count; ++v) {
        const std::uint32_t root = uf.find(v);
        if (left[root] && right[root]) return true;
    }
    return false;
}

/// Real-valued field sampled at the centers of an nx-by-ny grid of cells
/// covering a window (row-major, ix fastest).
struct FieldGrid {
    std::int64_t nx = 0;
    std::int64_t ny = 0;
    Window window;
    std::vector<double> values;

    double cell_w() const { return window.width() / static_cast<double>(nx); }
    double cell_h() const { return window.height() / static_cast<double>(ny); }

    Point cell_center(std::int64_t ix, std::int64_t iy) const {
        return {window.x_min + (static_cast<double>(ix) + 0.5) * cell_w(),
                window.y_min + (static_cast<double>(iy) + 0.5) * cell_h()};
    }

    double& at(std::int64_t ix, std::int64_t iy) { return values[static_cast<std::size_t>(iy * nx + ix)]; }
    double at(std::int64_t ix, std::int64_t iy) const {
        return values[static_cast<std::size_t>(iy * nx + ix)];
    }
};

enum class LevelDirection { sub_level, super_level };

/// Threshold a scalar grid at level M ({v <= M} or {v >= M}) and test
/// left-right crossing of the resulting site set.
inline bool level_set_crossing(const FieldGrid& grid, double M, LevelDirection dir) {
    if (grid.nx <= 0 || grid.ny <= 0 || grid.values.size() != static_cast<std::size_t>(grid.nx * grid.ny))
        throw ParameterError("level set: malformed grid");
    SiteField f;
    f.cell = grid.cell_w();  // column geometry drives left-right touch tests
    f.cx0 = grid.window.x_min + 0.5 * grid.cell_w();
    f.cy0 = grid.window.y_min + 0.5 * grid.cell_h();
    f.nx = grid.nx;
    f.ny = grid.ny;
    f.open.assign(grid.values.size(), 0);
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const bool in = dir == LevelDirection::sub_level ? grid.values[i] <= M : grid.values[i] >= M;
        f.open[i] = in ? 1 : 0;
    }
    return crossing_exists(f, grid.window);
}

}  // namespace subperc
