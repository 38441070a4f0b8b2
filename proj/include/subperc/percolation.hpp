#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "subperc/errors.hpp"
#include "subperc/parallel.hpp"
#include "subperc/point_process.hpp"
#include "subperc/site_field.hpp"
#include "subperc/spatial_graph.hpp"
#include "subperc/stats.hpp"

namespace subperc {

/// Seedable pattern source handed to threshold scans and Monte Carlo
/// estimators. `intensity` is the nominal mean density of the generated
/// patterns (used by moment-ratio and bound checks).
struct GeneratorSpec {
    std::function<PointPattern(std::uint64_t)> sample;
    std::string name;
    double intensity = 0.0;
    Window window;
};

inline GeneratorSpec poisson_generator(double intensity, const Window& window) {
    GeneratorSpec g;
    g.sample = [intensity, window](std::uint64_t seed) {
        return sample_homogeneous_poisson(intensity, window, seed);
    };
    g.name = "poisson";
    g.intensity = intensity;
    g.window = window;
    return g;
}

inline GeneratorSpec perturbed_lattice_generator(const Lattice& lat, const ReplicaLaw& law,
                                                 const Window& window) {
    GeneratorSpec g;
    g.sample = [lat, law, window](std::uint64_t seed) {
        return sample_perturbed_lattice(lat, law, window, seed);
    };
    g.name = "perturbed_" + law.name();
    g.intensity = lat.intensity() * law.mean();
    g.window = window;
    return g;
}

/// Bisection scan setup. The bracket must straddle the target fraction; each
/// bisection step averages the largest-component fraction over
/// `replications` patterns drawn with the pre-assigned per-replication seeds
/// (the same patterns are reused across steps, which keeps the per-pattern
/// fraction monotone along the scan).
struct ScanConfig {
    double target_fraction = 0.6;
    double tolerance = 0.01;
    double bracket_lo = 0.0;
    double bracket_hi = 1.0;
    int replications = 1;
    std::vector<std::uint64_t> seeds;
    Metric metric = Metric::torus;
    bool check_sandwich = true;
    int jobs = 1;

    void validate() const {
        if (!(target_fraction > 0.0 && target_fraction < 1.0))
            throw ParameterError("scan: target fraction must lie in (0,1)");
        if (!(tolerance > 0.0)) throw ParameterError("scan: tolerance must be positive");
        if (!(bracket_lo < bracket_hi)) throw ParameterError("scan: bracket lo must be below hi");
        if (replications < 1) throw ParameterError("scan: replications must be >= 1");
        if (seeds.size() < static_cast<std::size_t>(replications))
            throw ParameterError("scan: need one seed per replication");
    }
};

struct ScanStep {
    double param = 0.0;
    double mean_fraction = 0.0;
    double std_dev = 0.0;
};

struct ScanResult {
    double threshold = 0.0;
    std::vector<ScanStep> per_step;
    ScanConfig config;
};

/// Peierls path-count base: largest r with ((3^d-2) lambda (2r)^d)^n decaying
/// geometrically, i.e. c(lambda) = (1/2) ((3^d-2) lambda)^(-1/d).
inline double lower_bound_radius(double lambda, int d) {
    if (!(lambda > 0.0)) throw ParameterError("lower bound: lambda must be positive");
    if (d < 2) throw ParameterError("lower bound: dimension must be >= 2");
    return 0.5 * std::pow((std::pow(3.0, d) - 2.0) * lambda, -1.0 / static_cast<double>(d));
}

/// Sub-Poisson bound on a length-n path of sites being entirely void:
/// exp(-lambda n (r/sqrt(d))^d).
inline double peierls_void_bound(double lambda, double r, int n, int d) {
    if (lambda < 0.0 || r < 0.0) throw ParameterError("void bound: negative parameter");
    if (n < 1 || d < 1) throw ParameterError("void bound: n and d must be positive");
    return std::exp(-lambda * static_cast<double>(n) *
                    std::pow(r / std::sqrt(static_cast<double>(d)), d));
}

/// Expected-open-path-count bound ((3^d-2) lambda (2r)^d)^n.
inline double expected_path_count_bound(double lambda, double r, int n, int d) {
    if (lambda < 0.0 || r < 0.0) throw ParameterError("path bound: negative parameter");
    if (n < 1 || d < 1) throw ParameterError("path bound: n and d must be positive");
    return std::pow((std::pow(3.0, d) - 2.0) * lambda * std::pow(2.0 * r, d), n);
}

/// Per-realization discretization sandwich for the Boolean model of radius r:
/// crossing of the fine site field (cell r/sqrt(2)) implies crossing of the
/// Gilbert graph at range 2r (balls of radius r touching the window edges),
/// which implies band-touch crossing of the coarse site field (cell 2r,
/// touch band r). Returns true when no implication is violated.
inline bool check_discretization_sandwich(const PointPattern& pattern, double r) {
    if (!(r > 0.0)) throw ParameterError("sandwich: radius must be positive");
    const SiteField fine = site_percolation_field(pattern, r / std::sqrt(2.0));
    const SiteField coarse = site_percolation_field(pattern, 2.0 * r);
    const SpatialGraph graph = build_gilbert(pattern, 2.0 * r, Metric::euclidean);
    const bool fine_crossing = crossing_exists(fine, pattern.window);
    const bool graph_crossing = crossing_exists(graph, pattern, r);
    const bool coarse_crossing = crossing_exists(coarse, pattern.window, r);
    if (fine_crossing && !graph_crossing) return false;
    if (graph_crossing && !coarse_crossing) return false;
    return true;
}

namespace detail {

struct FractionEval {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Mean largest-component fraction over a fixed set of patterns at range rho.
inline FractionEval gilbert_fraction(const std::vector<PointPattern>& patterns, double rho,
                                     Metric metric, bool check_sandwich, int jobs) {
    std::vector<double> fr(patterns.size(), 0.0);
    parallel_for(patterns.size(), jobs, [&](std::size_t i) {
        const SpatialGraph g = build_gilbert(patterns[i], rho, metric);
        fr[i] = largest_component_fraction(g);
        if (check_sandwich && !check_discretization_sandwich(patterns[i], rho / 2.0))
            throw std::logic_error("discretization sandwich violated at rho=" + std::to_string(rho));
    });
    return {sample_mean(fr), sample_std(fr)};
}

}  // namespace detail

/// Critical communication range by bisection of the mean largest-component
/// fraction: smallest rho (to within `tolerance`) at which the mean fraction
/// reaches the target. Patterns are drawn once per replication from the
/// pre-assigned seeds and shared across bisection steps.
inline ScanResult estimate_critical_radius(const GeneratorSpec& generator, const ScanConfig& config) {
    config.validate();
    ScanResult result;
    result.config = config;

    std::vector<PointPattern> patterns(config.replications);
    parallel_for(patterns.size(), config.jobs, [&](std::size_t i) {
        patterns[i] = generator.sample(config.seeds[i]);
        if (patterns[i].size() < 100)
            throw PreconditionError("scan: generator produced a pattern with fewer than 100 points",
                                    static_cast<double>(patterns[i].size()));
    });

    auto eval = [&](double rho) {
        const auto fe =
            detail::gilbert_fraction(patterns, rho, config.metric, config.check_sandwich, config.jobs);
        result.per_step.push_back({rho, fe.mean, fe.stddev});
        return fe.mean;
    };

    double lo = config.bracket_lo;
    double hi = config.bracket_hi;
    const double f_lo = eval(lo);
    const double f_hi = eval(hi);
    if (!(f_lo < config.target_fraction && config.target_fraction < f_hi))
        throw BracketingError("scan: bracket does not straddle the target fraction (fraction(lo)=" +
                                  std::to_string(f_lo) + ", fraction(hi)=" + std::to_string(f_hi) + ")",
                              f_lo, f_hi);

    while (hi - lo > config.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) >= config.target_fraction)
            hi = mid;
        else
            lo = mid;
    }
    result.threshold = 0.5 * (lo + hi);
    return result;
}

}  // namespace subperc
