#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <queue>
#include <set>
#include <vector>

#include "subperc/point_process.hpp"
#include "subperc/spatial_graph.hpp"

using namespace subperc;

namespace {

PointPattern make_pattern(std::vector<Point> pts, const Window& w) {
    PointPattern pat;
    pat.points = std::move(pts);
    pat.window = w;
    return pat;
}

/// O(n^2) reference edge set.
std::vector<std::pair<std::uint32_t, std::uint32_t>> brute_force_edges(const PointPattern& pat, double rho,
                                                                       Metric metric) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < pat.size(); ++i)
        for (std::uint32_t j = i + 1; j < pat.size(); ++j)
            if (metric_sq_distance(pat.points[i], pat.points[j], metric, pat.window) <= rho * rho)
                edges.emplace_back(i, j);
    return edges;
}

/// Breadth-first component labels, the reference for union-find.
std::vector<std::uint32_t> bfs_labels(const SpatialGraph& g) {
    std::vector<std::vector<std::uint32_t>> adj(g.node_count);
    for (const auto& [i, j] : g.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<std::uint32_t> label(g.node_count, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next = 0;
    for (std::uint32_t start = 0; start < g.node_count; ++start) {
        if (label[start] != std::numeric_limits<std::uint32_t>::max()) continue;
        std::queue<std::uint32_t> q;
        q.push(start);
        label[start] = next;
        while (!q.empty()) {
            const std::uint32_t v = q.front();
            q.pop();
            for (std::uint32_t u : adj[v])
                if (label[u] == std::numeric_limits<std::uint32_t>::max()) {
                    label[u] = next;
                    q.push(u);
                }
        }
        ++next;
    }
    return label;
}

}  // namespace

TEST_CASE("gilbert: three collinear points") {
    const PointPattern pat = make_pattern({{0, 0}, {1, 0}, {3, 0}}, Window::rect(10, 10));
    const SpatialGraph g = build_gilbert(pat, 1.5, Metric::euclidean);
    REQUIRE(g.edges == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}});
    const ComponentStats stats = connected_components(g);
    REQUIRE(stats.labels[0] == stats.labels[1]);
    REQUIRE(stats.labels[2] != stats.labels[0]);
    REQUIRE(stats.sizes_desc == std::vector<std::uint32_t>{2, 1});
}

TEST_CASE("gilbert: distances exactly at rho count as edges") {
    const PointPattern pat = make_pattern({{0, 0}, {1, 0}}, Window::rect(10, 10));
    REQUIRE(build_gilbert(pat, 1.0, Metric::euclidean).edges.size() == 1);
    REQUIRE(build_gilbert(pat, 1.0, Metric::euclidean, EdgeRule::open).edges.empty());
    REQUIRE(build_gilbert(pat, 0.999, Metric::euclidean).edges.empty());
}

TEST_CASE("gilbert: negative range is rejected") {
    const PointPattern pat = make_pattern({{0, 0}}, Window::rect(1, 1));
    REQUIRE_THROWS_AS(build_gilbert(pat, -0.1, Metric::euclidean), ParameterError);
}

TEST_CASE("gilbert: cell list agrees with the all-pairs oracle") {
    const Window w = Window::rect(12.0, 9.0, BoundaryMode::torus);
    const PointPattern pat = sample_homogeneous_poisson(2.0, w, 202);
    REQUIRE(pat.size() >= 150);
    for (const Metric metric : {Metric::euclidean, Metric::torus}) {
        for (const double rho : {0.3, 0.9, 2.5}) {
            const SpatialGraph g = build_gilbert(pat, rho, metric);
            REQUIRE(g.edges == brute_force_edges(pat, rho, metric));
        }
    }
}

TEST_CASE("gilbert: cell list survives cutoffs larger than the window") {
    const Window w = Window::rect(4.0, 4.0, BoundaryMode::torus);
    const PointPattern pat = sample_homogeneous_poisson(3.0, w, 7);
    for (const Metric metric : {Metric::euclidean, Metric::torus}) {
        const SpatialGraph g = build_gilbert(pat, 5.0, metric);
        REQUIRE(g.edges == brute_force_edges(pat, 5.0, metric));
    }
}

TEST_CASE("gilbert: monotone edge growth in rho") {
    const PointPattern pat = sample_homogeneous_poisson(1.5, Window::rect(10, 10), 11);
    const SpatialGraph g1 = build_gilbert(pat, 0.7, Metric::euclidean);
    const SpatialGraph g2 = build_gilbert(pat, 1.2, Metric::euclidean);
    const std::set<std::pair<std::uint32_t, std::uint32_t>> e2(g2.edges.begin(), g2.edges.end());
    for (const auto& e : g1.edges) REQUIRE(e2.count(e) == 1);
    REQUIRE(largest_component_fraction(g1) <= largest_component_fraction(g2));
}

TEST_CASE("gilbert: torus edges form a superset of the euclidean ones") {
    const Window w = Window::rect(8.0, 8.0, BoundaryMode::torus);
    const PointPattern pat = sample_homogeneous_poisson(1.0, w, 5);
    const SpatialGraph ge = build_gilbert(pat, 1.0, Metric::euclidean);
    const SpatialGraph gt = build_gilbert(pat, 1.0, Metric::torus);
    const std::set<std::pair<std::uint32_t, std::uint32_t>> te(gt.edges.begin(), gt.edges.end());
    for (const auto& e : ge.edges) REQUIRE(te.count(e) == 1);
}

TEST_CASE("gilbert: torus metric connects the aligned lattice at exactly rho = 1") {
    const Lattice lat;
    const Window w = lattice_aligned_window(lat, 8, 5, BoundaryMode::torus);
    const PointPattern pat = triangular_lattice_pattern(lat, w);
    // at the nearest-neighbor spacing the whole torus lattice is one component
    REQUIRE(largest_component_fraction(build_gilbert(pat, 1.0, Metric::torus)) == 1.0);
    // just below it the graph is edgeless
    REQUIRE(build_gilbert(pat, 0.999, Metric::torus).edges.empty());
}

TEST_CASE("carrier sense: empty interferers reduce to the Gilbert graph") {
    const Window w = Window::rect(10, 10);
    const PointPattern backbone = sample_homogeneous_poisson(1.0, w, 31);
    PointPattern no_interferers;
    no_interferers.window = w;
    const SpatialGraph cs = build_carrier_sense(backbone, no_interferers, 1.0, 2.0);
    const SpatialGraph g = build_gilbert(backbone, 1.0, Metric::euclidean);
    REQUIRE(cs.edges == g.edges);
}

TEST_CASE("carrier sense: a close interferer silences a node") {
    const Window w = Window::rect(10, 10);
    const PointPattern backbone = make_pattern({{0, 0}, {1, 0}}, w);

    // interferer far from both: edge present
    const PointPattern far = make_pattern({{0.5, 5.0}}, w);
    REQUIRE(build_carrier_sense(backbone, far, 1.5, 2.0).edges.size() == 1);

    // interferer within sensing range of both: edge gone
    const PointPattern near = make_pattern({{0.5, 1.0}}, w);
    REQUIRE(build_carrier_sense(backbone, near, 1.5, 2.0).edges.empty());
}

TEST_CASE("carrier sense: R <= rho is rejected") {
    const Window w = Window::rect(10, 10);
    const PointPattern backbone = make_pattern({{0, 0}, {1, 0}}, w);
    const PointPattern inter = make_pattern({{5, 5}}, w);
    REQUIRE_THROWS_AS(build_carrier_sense(backbone, inter, 1.5, 1.5), ParameterError);
    REQUIRE_THROWS_AS(build_carrier_sense(backbone, inter, 1.5, 1.0), ParameterError);
}

TEST_CASE("carrier sense edges are a subset of Gilbert edges") {
    const Window w = Window::rect(10, 10);
    const PointPattern backbone = sample_homogeneous_poisson(1.2, w, 9);
    const PointPattern inter = sample_homogeneous_poisson(0.1, w, 10);
    const SpatialGraph cs = build_carrier_sense(backbone, inter, 1.0, 1.5);
    const SpatialGraph g = build_gilbert(backbone, 1.0, Metric::euclidean);
    const std::set<std::pair<std::uint32_t, std::uint32_t>> ge(g.edges.begin(), g.edges.end());
    for (const auto& e : cs.edges) REQUIRE(ge.count(e) == 1);
}

TEST_CASE("components: complete and edgeless graphs") {
    SpatialGraph complete;
    complete.node_count = 5;
    for (std::uint32_t i = 0; i < 5; ++i)
        for (std::uint32_t j = i + 1; j < 5; ++j) complete.edges.emplace_back(i, j);
    REQUIRE(connected_components(complete).largest_fraction == 1.0);

    SpatialGraph edgeless;
    edgeless.node_count = 20;
    const ComponentStats stats = connected_components(edgeless);
    REQUIRE_THAT(stats.largest_fraction, Catch::Matchers::WithinAbs(1.0 / 20.0, 1e-15));
    for (double f : stats.top10_fractions) REQUIRE_THAT(f, Catch::Matchers::WithinAbs(1.0 / 20.0, 1e-15));
}

TEST_CASE("components: empty graph") {
    SpatialGraph g;
    const ComponentStats stats = connected_components(g);
    REQUIRE(stats.largest_fraction == 0.0);
    REQUIRE(stats.sizes_desc.empty());
}

TEST_CASE("components: union-find agrees with BFS on a random graph") {
    const Window w = Window::rect(25.0, 25.0);
    const PointPattern pat = sample_homogeneous_poisson(0.8, w, 55);
    REQUIRE(pat.size() >= 400);
    const SpatialGraph g = build_gilbert(pat, 0.9, Metric::euclidean);
    const ComponentStats stats = connected_components(g);
    const std::vector<std::uint32_t> ref = bfs_labels(g);

    // same partition up to relabeling
    for (std::uint32_t u = 0; u < g.node_count; ++u)
        for (std::uint32_t v = u + 1; v < std::min<std::uint32_t>(g.node_count, u + 50); ++v)
            REQUIRE((stats.labels[u] == stats.labels[v]) == (ref[u] == ref[v]));

    // sizes partition the node count
    std::uint64_t total = 0;
    for (const std::uint32_t s : stats.sizes_desc) total += s;
    REQUIRE(total == g.node_count);
    REQUIRE(std::is_sorted(stats.sizes_desc.rbegin(), stats.sizes_desc.rend()));

    // labels are compacted by smallest node index: node 0 always holds label 0
    REQUIRE(stats.labels[0] == 0);
}

TEST_CASE("top10 fractions are nonincreasing and sum to at most one") {
    const PointPattern pat = sample_homogeneous_poisson(1.0, Window::rect(15, 15), 3);
    const SpatialGraph g = build_gilbert(pat, 0.8, Metric::euclidean);
    const ComponentStats stats = connected_components(g);
    double sum = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
        sum += stats.top10_fractions[k];
        if (k > 0) REQUIRE(stats.top10_fractions[k] <= stats.top10_fractions[k - 1]);
    }
    REQUIRE(sum <= 1.0 + 1e-12);
}
