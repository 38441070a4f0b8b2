#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "subperc/errors.hpp"
#include "subperc/geometry.hpp"
#include "subperc/point_process.hpp"

namespace subperc {

enum class Metric { euclidean, torus };

/// Edge convention at the cutoff distance: closed keeps d == rho as an edge
/// (Gilbert default), open drops it (SINR strict inequality).
enum class EdgeRule { closed, open };

inline std::string to_string(Metric m) { return m == Metric::torus ? "torus" : "euclidean"; }

inline double metric_sq_distance(const Point& a, const Point& b, Metric metric, const Window& w) {
    return metric == Metric::torus ? torus_sq_distance(a, b, w) : euclidean_sq_distance(a, b);
}

/// Closed-rule cutoff test with an ulp-scale slack, so that ties intended to
/// be exact (lattice spacings at rho equal to the spacing) survive rounding
/// in the squared distances. The open rule stays strict.
inline bool within_closed(double d2, double rho2) {
    return d2 <= rho2 + 8.0 * std::numeric_limits<double>::epsilon() * rho2;
}

/// Undirected geometric graph over the points of a pattern. Edges are stored
/// once with i < j, sorted lexicographically.
struct SpatialGraph {
    std::size_t node_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    Metric metric = Metric::euclidean;
};

/// Union-find with path compression and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t x, std::uint32_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (size_[x] < size_[y]) std::swap(x, y);
        parent_[y] = x;
        size_[x] += size_[y];
    }

    std::uint32_t component_size(std::uint32_t x) { return size_[find(x)]; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

/// Fixed-radius neighbor search by grid binning. Cell side is at least the
/// cutoff, so all pairs within the cutoff live in the 3x3 stencil around a
/// point's cell (wrapped on the torus). Grids with fewer than three cells per
/// axis alias under wrapping; the stencil is deduplicated so each candidate
/// pair is still visited exactly once.
class CellList {
public:
    CellList(const std::vector<Point>& pts, double cutoff, Metric metric, const Window& w)
        : points_(pts), metric_(metric), window_(w) {
        if (metric == Metric::torus) {
            x0_ = w.x_min;
            y0_ = w.y_min;
            extent_x_ = w.width();
            extent_y_ = w.height();
        } else {
            double lo_x = w.x_min, hi_x = w.x_max, lo_y = w.y_min, hi_y = w.y_max;
            for (const Point& p : pts) {
                lo_x = std::min(lo_x, p.x);
                hi_x = std::max(hi_x, p.x);
                lo_y = std::min(lo_y, p.y);
                hi_y = std::max(hi_y, p.y);
            }
            x0_ = lo_x;
            y0_ = lo_y;
            extent_x_ = std::max(hi_x - lo_x, 1e-12);
            extent_y_ = std::max(hi_y - lo_y, 1e-12);
        }
        nx_ = cutoff > 0.0 ? std::max<std::int64_t>(1, static_cast<std::int64_t>(extent_x_ / cutoff)) : 1;
        ny_ = cutoff > 0.0 ? std::max<std::int64_t>(1, static_cast<std::int64_t>(extent_y_ / cutoff)) : 1;
        cell_x_ = extent_x_ / static_cast<double>(nx_);
        cell_y_ = extent_y_ / static_cast<double>(ny_);
        heads_.assign(static_cast<std::size_t>(nx_ * ny_), -1);
        next_.assign(pts.size(), -1);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::size_t c = cell_index(pts[i]);
            next_[i] = heads_[c];
            heads_[c] = static_cast<std::int64_t>(i);
        }
    }

    /// Visit each unordered candidate pair (i < j) from same or adjacent
    /// cells exactly once.
    template <typename Fn>
    void for_each_candidate_pair(Fn&& fn) const {
        std::array<std::size_t, 9> stencil{};
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const std::size_t n = stencil_cells(points_[i], stencil);
            for (std::size_t s = 0; s < n; ++s) {
                for (std::int64_t j = heads_[stencil[s]]; j >= 0; j = next_[j]) {
                    if (static_cast<std::size_t>(j) > i) fn(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
                }
            }
        }
    }

    /// Visit candidate neighbors of an external query point.
    template <typename Fn>
    void for_each_candidate_of(const Point& q, Fn&& fn) const {
        std::array<std::size_t, 9> stencil{};
        const std::size_t n = stencil_cells(q, stencil);
        for (std::size_t s = 0; s < n; ++s)
            for (std::int64_t j = heads_[stencil[s]]; j >= 0; j = next_[j]) fn(static_cast<std::uint32_t>(j));
    }

private:
    std::size_t cell_index(const Point& p) const {
        auto ix = static_cast<std::int64_t>((p.x - x0_) / cell_x_);
        auto iy = static_cast<std::int64_t>((p.y - y0_) / cell_y_);
        ix = std::clamp<std::int64_t>(ix, 0, nx_ - 1);
        iy = std::clamp<std::int64_t>(iy, 0, ny_ - 1);
        return static_cast<std::size_t>(iy * nx_ + ix);
    }

    std::size_t stencil_cells(const Point& p, std::array<std::size_t, 9>& out) const {
        auto ix = static_cast<std::int64_t>((p.x - x0_) / cell_x_);
        auto iy = static_cast<std::int64_t>((p.y - y0_) / cell_y_);
        ix = std::clamp<std::int64_t>(ix, 0, nx_ - 1);
        iy = std::clamp<std::int64_t>(iy, 0, ny_ - 1);
        std::size_t n = 0;
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                std::int64_t cx = ix + dx;
                std::int64_t cy = iy + dy;
                if (metric_ == Metric::torus) {
                    cx = (cx % nx_ + nx_) % nx_;
                    cy = (cy % ny_ + ny_) % ny_;
                } else if (cx < 0 || cx >= nx_ || cy < 0 || cy >= ny_) {
                    continue;
                }
                const auto cell = static_cast<std::size_t>(cy * nx_ + cx);
                bool seen = false;
                for (std::size_t k = 0; k < n; ++k)
                    if (out[k] == cell) {
                        seen = true;
                        break;
                    }
                if (!seen) out[n++] = cell;
            }
        }
        return n;
    }

    const std::vector<Point>& points_;
    Metric metric_;
    Window window_;
    double x0_ = 0, y0_ = 0, extent_x_ = 1, extent_y_ = 1, cell_x_ = 1, cell_y_ = 1;
    std::int64_t nx_ = 1, ny_ = 1;
    std::vector<std::int64_t> heads_;
    std::vector<std::int64_t> next_;
};

/// Gilbert graph: edge between every pair within communication range rho.
inline SpatialGraph build_gilbert(const PointPattern& pattern, double rho, Metric metric,
                                  EdgeRule rule = EdgeRule::closed) {
    if (rho < 0.0) throw ParameterError("gilbert: negative communication range");
    SpatialGraph g;
    g.node_count = pattern.size();
    g.metric = metric;
    const double rho2 = rho * rho;
    CellList cells(pattern.points, rho, metric, pattern.window);
    cells.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) {
        const double d2 = metric_sq_distance(pattern.points[i], pattern.points[j], metric, pattern.window);
        const bool in = rule == EdgeRule::closed ? within_closed(d2, rho2) : d2 < rho2;
        if (in) g.edges.emplace_back(i, j);
    });
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

/// Carrier-sense variant: a pair within range rho is joined only when no
/// interferer lies within the sensing range R of either endpoint.
inline SpatialGraph build_carrier_sense(const PointPattern& backbone, const PointPattern& interferers,
                                        double rho, double R, Metric metric = Metric::euclidean) {
    if (!(rho > 0.0)) throw ParameterError("carrier sense: rho must be positive");
    if (!(R > rho)) throw ParameterError("carrier sense: sensing range R must exceed rho");

    std::vector<char> blocked(backbone.size(), 0);
    if (!interferers.points.empty()) {
        CellList icells(interferers.points, R, metric, backbone.window);
        const double R2 = R * R;
        for (std::size_t i = 0; i < backbone.size(); ++i) {
            icells.for_each_candidate_of(backbone.points[i], [&](std::uint32_t j) {
                if (!blocked[i] &&
                    within_closed(
                        metric_sq_distance(backbone.points[i], interferers.points[j], metric, backbone.window),
                        R2))
                    blocked[i] = 1;
            });
        }
    }

    SpatialGraph g;
    g.node_count = backbone.size();
    g.metric = metric;
    const double rho2 = rho * rho;
    CellList cells(backbone.points, rho, metric, backbone.window);
    cells.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) {
        if (blocked[i] || blocked[j]) return;
        if (within_closed(metric_sq_distance(backbone.points[i], backbone.points[j], metric, backbone.window),
                          rho2))
            g.edges.emplace_back(i, j);
    });
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

/// Per-node component labels and size statistics. Labels are compacted in
/// order of each component's smallest node index, so the labeling is
/// deterministic for a given edge set.
struct ComponentStats {
    std::vector<std::uint32_t> labels;
    std::vector<std::uint32_t> sizes_desc;
    double largest_fraction = 0.0;
    std::array<double, 10> top10_fractions{};
};

inline ComponentStats connected_components(const SpatialGraph& g) {
    ComponentStats stats;
    const std::size_t n = g.node_count;
    stats.labels.assign(n, 0);
    if (n == 0) return stats;

    UnionFind uf(n);
    for (const auto& [i, j] : g.edges) {
        if (i >= n || j >= n) throw ParameterError("components: edge endpoint out of range");
        uf.unite(i, j);
    }

    std::vector<std::uint32_t> root_label(n, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next_label = 0;
    std::vector<std::uint32_t> sizes;
    for (std::uint32_t v = 0; v < n; ++v) {
        const std::uint32_t r = uf.find(v);
        if (root_label[r] == std::numeric_limits<std::uint32_t>::max()) {
            root_label[r] = next_label++;
            sizes.push_back(uf.component_size(r));
        }
        stats.labels[v] = root_label[r];
    }

    stats.sizes_desc = sizes;
    std::sort(stats.sizes_desc.begin(), stats.sizes_desc.end(), std::greater<>());
    stats.largest_fraction = static_cast<double>(stats.sizes_desc.front()) / static_cast<double>(n);
    for (std::size_t k = 0; k < stats.top10_fractions.size(); ++k)
        stats.top10_fractions[k] =
            k < stats.sizes_desc.size() ? static_cast<double>(stats.sizes_desc[k]) / static_cast<double>(n) : 0.0;
    return stats;
}

/// Largest-component fraction without materializing full stats.
inline double largest_component_fraction(const SpatialGraph& g) {
    if (g.node_count == 0) return 0.0;
    UnionFind uf(g.node_count);
    for (const auto& [i, j] : g.edges) uf.unite(i, j);
    std::uint32_t best = 0;
    for (std::uint32_t v = 0; v < g.node_count; ++v) best = std::max(best, uf.component_size(v));
    return static_cast<double>(best) / static_cast<double>(g.node_count);
}

}  // namespace subperc
