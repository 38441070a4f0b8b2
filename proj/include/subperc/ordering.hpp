#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "subperc/errors.hpp"
#include "subperc/geometry.hpp"
#include "subperc/parallel.hpp"
#include "subperc/percolation.hpp"
#include "subperc/point_process.hpp"
#include "subperc/spatial_graph.hpp"
#include "subperc/stats.hpp"

namespace subperc {

/// Integer count law given by an explicit pmf prefix plus its exact mean.
/// The pmf is extended until the omitted tail carries less than tail_eps of
/// both mass and mean, so truncation stays quantified. Stop-loss values are
/// computed from the exact mean and the finite head only, which is exact:
/// E(N-k)+ = mean - k + sum_{j<k} (k-j) pmf(j).
struct CountDistribution {
    std::string name;
    std::vector<double> pmf;
    double mean = 0.0;

    double pmf_at(std::size_t k) const { return k < pmf.size() ? pmf[k] : 0.0; }

    double total_mass() const {
        double s = 0.0;
        for (double p : pmf) s += p;
        return s;
    }

    static CountDistribution poisson(double lambda, double tail_eps = 1e-18) {
        if (lambda < 0.0) throw ParameterError("count distribution: negative poisson mean");
        CountDistribution d;
        d.name = "Poi(" + std::to_string(lambda) + ")";
        d.mean = lambda;
        double p = std::exp(-lambda);
        double mass = 0.0;
        double mean_seen = 0.0;
        for (std::size_t k = 0;; ++k) {
            d.pmf.push_back(p);
            mass += p;
            mean_seen += p * static_cast<double>(k);
            if (1.0 - mass < tail_eps && lambda - mean_seen < std::max(tail_eps, 1e-15 * (1.0 + lambda)) &&
                static_cast<double>(k) > lambda)
                break;
            if (k > 4000) break;  // lambda beyond replica-law scales
            p *= lambda / static_cast<double>(k + 1);
        }
        return d;
    }

    static CountDistribution binomial(std::uint32_t n, double p) {
        if (n == 0 || p < 0.0 || p > 1.0) throw ParameterError("count distribution: bad binomial");
        CountDistribution d;
        d.name = "Bin(" + std::to_string(n) + "," + std::to_string(p) + ")";
        d.mean = static_cast<double>(n) * p;
        d.pmf.assign(n + 1, 0.0);
        // multiplicative recurrence over C(n,k) p^k (1-p)^(n-k)
        double term = std::pow(1.0 - p, n);
        if (p == 1.0) term = 0.0;
        for (std::uint32_t k = 0; k <= n; ++k) {
            if (p == 1.0) {
                d.pmf[k] = (k == n) ? 1.0 : 0.0;
                continue;
            }
            d.pmf[k] = term;
            if (k < n) term *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) * (p / (1.0 - p));
        }
        return d;
    }

    static CountDistribution from_replica_law(const ReplicaLaw& law, double tail_eps = 1e-18) {
        switch (law.kind) {
            case ReplicaLaw::Kind::binomial:
                return binomial(law.n, law.p);
            case ReplicaLaw::Kind::poisson:
                return poisson(law.mean_param, tail_eps);
            case ReplicaLaw::Kind::cox_bernoulli: {
                // mixture: N = 0 w.p. 1 - 1/a, else Poisson(a)
                CountDistribution base = poisson(law.a, tail_eps);
                CountDistribution d;
                d.name = law.name();
                d.mean = 1.0;
                d.pmf.assign(base.pmf.size(), 0.0);
                const double w = 1.0 / law.a;
                for (std::size_t k = 0; k < base.pmf.size(); ++k) d.pmf[k] = w * base.pmf[k];
                d.pmf[0] += 1.0 - w;
                return d;
            }
            case ReplicaLaw::Kind::scaled_poisson: {
                CountDistribution base = poisson(1.0 / law.n, tail_eps);
                CountDistribution d;
                d.name = law.name();
                d.mean = 1.0;
                d.pmf.assign(base.pmf.size() * law.n + 1, 0.0);
                for (std::size_t k = 0; k < base.pmf.size(); ++k) d.pmf[k * law.n] = base.pmf[k];
                return d;
            }
        }
        throw ParameterError("count distribution: unknown replica law");
    }
};

/// Stop-loss transform E[(N - k)+], exact given the exact mean.
inline double stop_loss(const CountDistribution& dist, int k) {
    if (k < 0) throw ParameterError("stop loss: k must be nonnegative");
    double below = 0.0;
    for (int j = 0; j < k; ++j) below += static_cast<double>(k - j) * dist.pmf_at(static_cast<std::size_t>(j));
    return dist.mean - static_cast<double>(k) + below;
}

/// Outcome of the cut-criterion convex-order check: equal means plus
/// stop-loss dominance up to k_max. On failure, witness_k is the first k at
/// which dominance fails (-1 when the means already disagree).
struct ConvexOrderResult {
    bool ordered = false;
    bool mean_mismatch = false;
    int witness_k = -1;
    double lower_value = 0.0;
    double upper_value = 0.0;
};

inline ConvexOrderResult check_convex_order(const CountDistribution& lower,
                                            const CountDistribution& upper, int k_max) {
    if (k_max < 0) throw ParameterError("convex order: k_max must be nonnegative");
    ConvexOrderResult res;
    if (std::fabs(lower.mean - upper.mean) > 1e-9) {
        res.mean_mismatch = true;
        res.lower_value = lower.mean;
        res.upper_value = upper.mean;
        return res;
    }
    // Both stop-loss tails beyond k_max must be negligible for the finite
    // check to certify the full order.
    if (stop_loss(lower, k_max) > 1e-10 || stop_loss(upper, k_max) > 1e-10)
        throw ParameterError("convex order: k_max too small, stop-loss tails above 1e-10");
    for (int k = 0; k <= k_max; ++k) {
        const double sl = stop_loss(lower, k);
        const double su = stop_loss(upper, k);
        if (sl > su + 1e-12) {
            res.witness_k = k;
            res.lower_value = sl;
            res.upper_value = su;
            return res;
        }
    }
    res.ordered = true;
    return res;
}

/// Axis-aligned rectangle (allows degenerate boxes down to a single point).
struct Rect {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    double perimeter() const { return 2.0 * (width() + height()); }

    void validate() const {
        if (x_min > x_max || y_min > y_max) throw ParameterError("rect: inverted bounds");
    }

    static Rect point_at(double x, double y) { return Rect{x, x, y, y}; }

    bool overlaps_interior(const Rect& o) const {
        return x_min < o.x_max && o.x_min < x_max && y_min < o.y_max && o.y_min < y_max;
    }
};

/// Area of the r-dilation B + B(0, r) of a rectangle: area + perimeter r + pi r^2.
inline double dilated_rect_area(const Rect& b, double r) {
    return b.area() + b.perimeter() * r + std::numbers::pi * r * r;
}

/// Distance from a point to a rectangle (0 inside).
inline double distance_to_rect(const Point& p, const Rect& b) {
    const double dx = std::max({b.x_min - p.x, 0.0, p.x - b.x_max});
    const double dy = std::max({b.y_min - p.y, 0.0, p.y - b.y_max});
    return std::sqrt(dx * dx + dy * dy);
}

/// Closed-form Poisson void probability exp(-lambda |B + r|).
inline double poisson_void_reference(double lambda, const Rect& b, double r) {
    return std::exp(-lambda * dilated_rect_area(b, r));
}

/// Void probability of the Boolean model C(Phi, r) on B: the fraction of
/// replications with no pattern point within distance r of B. The capacity
/// functional is 1 - value.
inline EstimateWithCI estimate_void_probability(const GeneratorSpec& generator, const Rect& b, double r,
                                                int replications, const std::vector<std::uint64_t>& seeds,
                                                int jobs = 1) {
    b.validate();
    if (r < 0.0) throw ParameterError("void probability: negative radius");
    if (replications < 1 || seeds.size() < static_cast<std::size_t>(replications))
        throw ParameterError("void probability: need one seed per replication");
    const Window& w = generator.window;
    if (b.x_min - r < w.x_min || b.x_max + r > w.x_max || b.y_min - r < w.y_min || b.y_max + r > w.y_max)
        throw GeometryError("void probability: dilated box leaves the generation window");

    std::vector<double> is_void(static_cast<std::size_t>(replications), 0.0);
    parallel_for(is_void.size(), jobs, [&](std::size_t i) {
        const PointPattern pat = generator.sample(seeds[i]);
        bool empty = true;
        for (const Point& p : pat.points) {
            if (distance_to_rect(p, b) <= r) {
                empty = false;
                break;
            }
        }
        is_void[i] = empty ? 1.0 : 0.0;
    });
    return estimate_from_samples(is_void);
}

/// Ripley K estimator. Torus windows use the wrapped metric (no edge
/// correction needed); free windows use the translation correction.
inline std::vector<double> ripley_k(const PointPattern& pattern, const std::vector<double>& radii) {
    const std::size_t n = pattern.size();
    if (n < 2) throw ParameterError("ripley k: need at least two points");
    const Window& w = pattern.window;
    double r_max = 0.0;
    for (double r : radii) {
        if (r < 0.0) throw ParameterError("ripley k: negative radius");
        r_max = std::max(r_max, r);
    }
    if (r_max >= 0.5 * std::min(w.width(), w.height()))
        throw ParameterError("ripley k: radii must stay below half the window span");

    const bool torus = w.mode == BoundaryMode::torus;
    const double area = w.area();
    const double nd = static_cast<double>(n);

    // sorted copy of radii for cumulative counting, unsorted order restored below
    std::vector<std::size_t> order(radii.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });

    std::vector<double> weight_sum(radii.size(), 0.0);
    if (r_max > 0.0) {
        CellList cells(pattern.points, r_max, torus ? Metric::torus : Metric::euclidean, w);
        cells.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) {
            const Point& a = pattern.points[i];
            const Point& b = pattern.points[j];
            const double d = torus ? torus_distance(a, b, w) : euclidean_distance(a, b);
            if (d > r_max) return;
            double weight = 2.0;  // unordered pair counted for both orders
            if (!torus) {
                const double ox = w.width() - std::fabs(a.x - b.x);
                const double oy = w.height() - std::fabs(a.y - b.y);
                weight = 2.0 * area / (ox * oy);
            }
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                if (radii[*it] >= d)
                    weight_sum[*it] += weight;
                else
                    break;
            }
        });
    }
    std::vector<double> k(radii.size(), 0.0);
    for (std::size_t t = 0; t < radii.size(); ++t) k[t] = area / (nd * nd) * weight_sum[t];
    return k;
}

/// Nearest-neighbor distance of every point, under the window's own metric.
/// Candidate pairs come from a cell list; the rare point with no neighbor
/// inside the cutoff falls back to a full scan.
inline std::vector<double> nearest_neighbor_distances(const PointPattern& pattern) {
    const std::size_t n = pattern.size();
    if (n < 2) throw ParameterError("nearest neighbors: need at least two points");
    const Metric metric =
        pattern.window.mode == BoundaryMode::torus ? Metric::torus : Metric::euclidean;
    const double cutoff = 2.0 / std::sqrt(std::max(pattern.empirical_intensity(), 1e-12));
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    CellList cells(pattern.points, cutoff, metric, pattern.window);
    cells.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) {
        const double d2 = metric_sq_distance(pattern.points[i], pattern.points[j], metric, pattern.window);
        best[i] = std::min(best[i], d2);
        best[j] = std::min(best[j], d2);
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (best[i] <= cutoff * cutoff) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            best[i] = std::min(best[i],
                               metric_sq_distance(pattern.points[i], pattern.points[j], metric, pattern.window));
        }
    }
    for (double& b : best) b = std::sqrt(b);
    return best;
}

/// Monte Carlo moment ratio E[prod_i Phi(B_i)] / prod_i (lambda |B_i|) over
/// disjoint boxes; values at or below one are the weak sub-Poisson
/// fingerprint at those boxes.
inline EstimateWithCI empirical_joint_intensity_ratio(const GeneratorSpec& generator,
                                                      const std::vector<Rect>& boxes, int replications,
                                                      const std::vector<std::uint64_t>& seeds,
                                                      int jobs = 1) {
    if (boxes.empty() || boxes.size() > 4)
        throw ParameterError("joint intensity: between one and four boxes");
    if (replications < 1 || seeds.size() < static_cast<std::size_t>(replications))
        throw ParameterError("joint intensity: need one seed per replication");
    double denom = 1.0;
    for (std::size_t a = 0; a < boxes.size(); ++a) {
        boxes[a].validate();
        if (!(boxes[a].area() > 0.0)) throw GeometryError("joint intensity: degenerate box");
        for (std::size_t b = a + 1; b < boxes.size(); ++b)
            if (boxes[a].overlaps_interior(boxes[b]))
                throw GeometryError("joint intensity: boxes overlap");
        denom *= generator.intensity * boxes[a].area();
    }
    if (!(denom > 0.0)) throw ParameterError("joint intensity: zero reference intensity");

    std::vector<double> products(static_cast<std::size_t>(replications), 0.0);
    parallel_for(products.size(), jobs, [&](std::size_t i) {
        const PointPattern pat = generator.sample(seeds[i]);
        std::vector<double> counts(boxes.size(), 0.0);
        for (const Point& p : pat.points)
            for (std::size_t a = 0; a < boxes.size(); ++a)
                if (p.x >= boxes[a].x_min && p.x <= boxes[a].x_max && p.y >= boxes[a].y_min &&
                    p.y <= boxes[a].y_max)
                    counts[a] += 1.0;
        double prod = 1.0;
        for (double c : counts) prod *= c;
        products[i] = prod;
    });
    EstimateWithCI e = estimate_from_samples(products);
    e.value /= denom;
    e.std_error /= denom;
    return e;
}

/// Mean Shannon capacity E[log(1 + F0 / (N + I))] over interference samples.
inline EstimateWithCI shannon_mean_capacity(const std::vector<double>& interference_samples, double F0,
                                            double N) {
    if (interference_samples.empty()) throw ParameterError("shannon capacity: empty samples");
    if (F0 < 0.0 || !(N > 0.0)) throw ParameterError("shannon capacity: need F0 >= 0 and N > 0");
    std::vector<double> v;
    v.reserve(interference_samples.size());
    for (double I : interference_samples) v.push_back(std::log1p(F0 / (N + I)));
    return estimate_from_samples(v);
}

/// Outage capacity Pr{F / (N + I) > T} under exponential fading:
/// E[exp(-rate T (N + I))].
inline EstimateWithCI outage_capacity(const std::vector<double>& interference_samples, double T, double N,
                                      double fading_rate = 1.0) {
    if (interference_samples.empty()) throw ParameterError("outage capacity: empty samples");
    if (!(T > 0.0) || N < 0.0 || !(fading_rate > 0.0))
        throw ParameterError("outage capacity: bad parameters");
    std::vector<double> v;
    v.reserve(interference_samples.size());
    for (double I : interference_samples) v.push_back(std::exp(-fading_rate * T * (N + I)));
    return estimate_from_samples(v);
}

}  // namespace subperc
