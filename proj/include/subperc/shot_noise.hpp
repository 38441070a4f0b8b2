#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "subperc/errors.hpp"
#include "subperc/geometry.hpp"
#include "subperc/percolation.hpp"
#include "subperc/point_process.hpp"
#include "subperc/site_field.hpp"
#include "subperc/spatial_graph.hpp"
#include "subperc/stats.hpp"

namespace subperc {

/// Path-gain (attenuation) function, 0 <= l <= 1, decreasing:
///   inverse_poly(alpha):          l(r) = (1+r)^-alpha, strictly decreasing
///   truncated_power(alpha, r0):   l(r) = min(1, (r/r0)^-alpha), flat on [0, r0]
/// The first moment int_0^inf r l(r) dr is finite only for alpha > 2; the
/// Laplace machinery rejects smaller exponents.
struct Attenuation {
    enum class Family { inverse_poly, truncated_power };

    Family family = Family::inverse_poly;
    double alpha = 4.0;
    double r0 = 1.0;

    static Attenuation inverse_poly(double alpha) {
        if (!(alpha > 0.0)) throw ParameterError("attenuation: alpha must be positive");
        Attenuation a;
        a.family = Family::inverse_poly;
        a.alpha = alpha;
        return a;
    }

    static Attenuation truncated_power(double alpha, double r0) {
        if (!(alpha > 0.0) || !(r0 > 0.0)) throw ParameterError("attenuation: bad parameters");
        Attenuation a;
        a.family = Family::truncated_power;
        a.alpha = alpha;
        a.r0 = r0;
        return a;
    }

    double operator()(double r) const {
        if (r < 0.0) throw ParameterError("attenuation: negative distance");
        switch (family) {
            case Family::inverse_poly:
                return std::pow(1.0 + r, -alpha);
            case Family::truncated_power:
                return r <= r0 ? 1.0 : std::pow(r / r0, -alpha);
        }
        return 0.0;
    }

    double at_zero() const { return 1.0; }

    /// Largest r with l(r) = y. Resolves the flat head of truncated_power at
    /// y = 1 by returning r0.
    double inverse(double y) const {
        if (!(y > 0.0) || y > 1.0) throw ParameterError("attenuation: inverse domain is (0, 1]");
        switch (family) {
            case Family::inverse_poly:
                return std::pow(y, -1.0 / alpha) - 1.0;
            case Family::truncated_power:
                return y >= 1.0 ? r0 : r0 * std::pow(y, -1.0 / alpha);
        }
        return 0.0;
    }

    bool integrable() const { return alpha > 2.0; }

    /// Closed-form tail of the first moment, int_R^inf r l(r) dr.
    double tail_first_moment(double R) const {
        if (!integrable()) throw IntegrationError("attenuation: first moment diverges (alpha <= 2)");
        if (R < 0.0) throw ParameterError("attenuation: negative truncation radius");
        switch (family) {
            case Family::inverse_poly: {
                const double u = 1.0 + R;
                return std::pow(u, 2.0 - alpha) / (alpha - 2.0) - std::pow(u, 1.0 - alpha) / (alpha - 1.0);
            }
            case Family::truncated_power: {
                if (R < r0) return 0.5 * (r0 * r0 - R * R) + r0 * r0 / (alpha - 2.0);
                return std::pow(r0, alpha) * std::pow(R, 2.0 - alpha) / (alpha - 2.0);
            }
        }
        return 0.0;
    }

    std::string name() const {
        switch (family) {
            case Family::inverse_poly:
                return "inverse_poly(alpha=" + std::to_string(alpha) + ")";
            case Family::truncated_power:
                return "truncated_power(alpha=" + std::to_string(alpha) + ",r0=" + std::to_string(r0) + ")";
        }
        return "?";
    }
};

/// Parameter bundle for the SINR graph: signal power P, noise N, threshold T,
/// interference factor gamma, and the attenuation.
struct SinrParams {
    double P = 1.0;
    double N = 0.5;
    double T = 1.0;
    double gamma = 0.0;
    Attenuation attenuation = Attenuation::inverse_poly(4.0);

    void validate() const {
        if (!(P > 0.0)) throw ParameterError("sinr: signal power must be positive");
        if (N < 0.0) throw ParameterError("sinr: noise must be nonnegative");
        if (!(T > 0.0)) throw ParameterError("sinr: threshold must be positive");
        if (gamma < 0.0) throw ParameterError("sinr: gamma must be nonnegative");
        if (attenuation.at_zero() < T * N / P)
            throw ParameterError("sinr: infeasible parameters, l(0) < TN/P");
    }
};

/// Additive shot-noise at x generated by the pattern: sum of l(|X - x|) over
/// all pattern points except `exclude` and except any point at x itself.
inline double interference_at(const PointPattern& pattern, Point x, const SinrParams& params,
                              std::optional<Point> exclude = std::nullopt,
                              Metric metric = Metric::euclidean) {
    double sum = 0.0;
    for (const Point& q : pattern.points) {
        if (points_equal(q, x)) continue;
        if (exclude && points_equal(q, *exclude)) continue;
        sum += params.attenuation(
            std::sqrt(metric_sq_distance(q, x, metric, pattern.window)));
    }
    return sum;
}

/// Truncated interference sum: gathers contributions within an adaptively
/// grown radius and stops once the analytic bound on the omitted tail
/// (remaining points times l(radius)) drops below rel_tol of the total.
inline double interference_at_truncated(const PointPattern& pattern, Point x, const SinrParams& params,
                                        double rel_tol = 1e-9, Metric metric = Metric::euclidean) {
    if (!(rel_tol > 0.0)) throw ParameterError("interference: tolerance must be positive");
    const std::size_t n = pattern.size();
    if (n == 0) return 0.0;
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i)
        d2[i] = metric_sq_distance(pattern.points[i], x, metric, pattern.window);
    std::sort(d2.begin(), d2.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] == 0.0) continue;  // the location itself
        const double d = std::sqrt(d2[i]);
        sum += params.attenuation(d);
        const std::size_t remaining = n - (i + 1);
        if (remaining == 0) break;
        if (static_cast<double>(remaining) * params.attenuation(d) <= rel_tol * sum) break;
    }
    return sum;
}

/// SNR communication range rho_l = l^{-1}(TN/P).
inline double snr_range(const SinrParams& params) {
    params.validate();
    if (!(params.N > 0.0))
        throw ParameterError("snr range: unbounded-support attenuation gives infinite range at N=0");
    const double y = params.T * params.N / params.P;
    if (y > params.attenuation.at_zero())
        throw ParameterError("snr range: TN/P exceeds l(0), no feasible range");
    return params.attenuation.inverse(y);
}

/// SINR from x to y: P l(|x-y|) / (N + gamma P I_{Phi \ {x}}(y)).
inline double sinr_value(Point x, Point y, const PointPattern& interferers, const SinrParams& params,
                         Metric metric = Metric::euclidean) {
    params.validate();
    const double interference = interference_at(interferers, y, params, x, metric);
    const double denom = params.N + params.gamma * params.P * interference;
    if (denom <= 0.0) throw ParameterError("sinr: degenerate parameters, zero denominator");
    const double d = std::sqrt(metric_sq_distance(x, y, metric, interferers.window));
    return params.P * params.attenuation(d) / denom;
}

namespace detail {

/// Exact-coordinate multiset membership, for the shared backbone/interferer
/// case. Hash buckets are verified by coordinate equality.
class PointSet {
public:
    explicit PointSet(const std::vector<Point>& pts) {
        buckets_.reserve(pts.size());
        for (const Point& p : pts) buckets_[key(p)].push_back(p);
    }

    std::size_t count(const Point& p) const {
        const auto it = buckets_.find(key(p));
        if (it == buckets_.end()) return 0;
        std::size_t n = 0;
        for (const Point& q : it->second)
            if (points_equal(p, q)) ++n;
        return n;
    }

    bool contains(const Point& p) const { return count(p) != 0; }

private:
    static std::uint64_t key(const Point& p) {
        std::uint64_t a, b;
        std::memcpy(&a, &p.x, sizeof a);
        std::memcpy(&b, &p.y, sizeof b);
        return mix64(a) ^ (b * 0x9E3779B97F4A7C15ULL);
    }
    std::unordered_map<std::uint64_t, std::vector<Point>> buckets_;
};

}  // namespace detail

/// SINR graph: undirected edge between backbone nodes X, Y when the SINR
/// strictly exceeds T in both directions. Backbone points appearing in the
/// interferer pattern are excluded from their own links per the interference
/// definition.
inline SpatialGraph build_sinr_graph(const PointPattern& backbone, const PointPattern& interferers,
                                     const SinrParams& params, Metric metric = Metric::euclidean) {
    params.validate();
    SpatialGraph g;
    g.node_count = backbone.size();
    g.metric = metric;
    if (backbone.size() < 2) return g;

    // Total interference at every backbone node (location itself excluded).
    std::vector<double> interference(backbone.size(), 0.0);
    for (std::size_t i = 0; i < backbone.size(); ++i)
        interference[i] = interference_at(interferers, backbone.points[i], params, std::nullopt, metric);
    const detail::PointSet members(interferers.points);

    auto directed_ok = [&](std::uint32_t from, std::uint32_t to, double d) {
        const Point& pf = backbone.points[from];
        const Point& pt = backbone.points[to];
        double inter = interference[to];
        if (!points_equal(pf, pt))
            inter -= static_cast<double>(members.count(pf)) * params.attenuation(d);
        const double denom = params.N + params.gamma * params.P * inter;
        if (denom <= 0.0) throw ParameterError("sinr graph: degenerate parameters, zero denominator");
        return params.P * params.attenuation(d) > params.T * denom;
    };

    auto test_pair = [&](std::uint32_t i, std::uint32_t j) {
        const double d =
            std::sqrt(metric_sq_distance(backbone.points[i], backbone.points[j], metric, backbone.window));
        if (directed_ok(i, j, d) && directed_ok(j, i, d)) g.edges.emplace_back(i, j);
    };

    if (params.N > 0.0) {
        // Edges require l(d) > TN/P, so candidates live within the SNR range.
        const double rho_l = snr_range(params);
        CellList cells(backbone.points, rho_l, metric, backbone.window);
        const double rho2 = rho_l * rho_l;
        cells.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) {
            if (metric_sq_distance(backbone.points[i], backbone.points[j], metric, backbone.window) <= rho2)
                test_pair(i, j);
        });
    } else {
        for (std::uint32_t i = 0; i < backbone.size(); ++i)
            for (std::uint32_t j = i + 1; j < backbone.size(); ++j) test_pair(i, j);
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

namespace detail {

/// Pattern pair with the gamma-independent quantities of a SINR scan
/// precomputed: candidate pairs within the SNR range, their gains, and the
/// interference at each endpoint with the transmitter contribution removed.
struct SinrReplication {
    std::size_t node_count = 0;
    struct Candidate {
        std::uint32_t i, j;
        double gain;        // l(d_ij)
        double inter_at_j;  // I(p_j) excluding p_i
        double inter_at_i;  // I(p_i) excluding p_j
    };
    std::vector<Candidate> candidates;

    double fraction_at_gamma(const SinrParams& params, double gamma) const {
        if (node_count == 0) return 0.0;
        UnionFind uf(node_count);
        for (const auto& c : candidates) {
            const double num = params.P * c.gain;
            if (num > params.T * (params.N + gamma * params.P * c.inter_at_j) &&
                num > params.T * (params.N + gamma * params.P * c.inter_at_i))
                uf.unite(c.i, c.j);
        }
        std::uint32_t best = 0;
        for (std::uint32_t v = 0; v < node_count; ++v) best = std::max(best, uf.component_size(v));
        return static_cast<double>(best) / static_cast<double>(node_count);
    }
};

inline SinrReplication prepare_sinr_replication(const PointPattern& backbone,
                                                const PointPattern& interferers,
                                                const SinrParams& params, Metric metric) {
    SinrReplication rep;
    rep.node_count = backbone.size();
    if (backbone.size() < 2) return rep;
    std::vector<double> interference(backbone.size(), 0.0);
    for (std::size_t i = 0; i < backbone.size(); ++i)
        interference[i] = interference_at(interferers, backbone.points[i], params, std::nullopt, metric);
    const PointSet members(interferers.points);
    const double rho_l = snr_range(params);
    const double rho2 = rho_l * rho_l;
    CellList cells(backbone.points, rho_l, metric, backbone.window);
    cells.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) {
        const double d2 = metric_sq_distance(backbone.points[i], backbone.points[j], metric, backbone.window);
        if (d2 > rho2) return;
        const double d = std::sqrt(d2);
        const double gain = params.attenuation(d);
        const bool distinct = !points_equal(backbone.points[i], backbone.points[j]);
        SinrReplication::Candidate c;
        c.i = i;
        c.j = j;
        c.gain = gain;
        const double mult_i = distinct ? static_cast<double>(members.count(backbone.points[i])) : 0.0;
        const double mult_j = distinct ? static_cast<double>(members.count(backbone.points[j])) : 0.0;
        c.inter_at_j = interference[j] - mult_i * gain;
        c.inter_at_i = interference[i] - mult_j * gain;
        rep.candidates.push_back(c);
    });
    return rep;
}

}  // namespace detail

/// Critical interference factor gamma_c by bisection: the mean
/// largest-component fraction is nonincreasing in gamma, and the scan finds
/// the gamma at which it crosses the target. Requires the gamma = 0 graph to
/// reach the target (reported otherwise) and the upper bracket to fall below
/// it.
inline ScanResult estimate_gamma_c(const GeneratorSpec& backbone_generator,
                                   const GeneratorSpec& interferer_generator,
                                   const SinrParams& params_base, const ScanConfig& config,
                                   Metric metric = Metric::torus) {
    config.validate();
    params_base.validate();
    if (config.bracket_lo != 0.0)
        throw ParameterError("gamma scan: bracket must start at gamma = 0");

    ScanResult result;
    result.config = config;

    std::vector<detail::SinrReplication> reps(config.replications);
    parallel_for(reps.size(), config.jobs, [&](std::size_t i) {
        const std::uint64_t seed = config.seeds[i];
        const PointPattern backbone = backbone_generator.sample(derive_seed(seed, 1));
        const PointPattern interferers = interferer_generator.sample(derive_seed(seed, 2));
        reps[i] = detail::prepare_sinr_replication(backbone, interferers, params_base, metric);
    });

    auto eval = [&](double gamma) {
        std::vector<double> fr(reps.size(), 0.0);
        parallel_for(reps.size(), config.jobs,
                     [&](std::size_t i) { fr[i] = reps[i].fraction_at_gamma(params_base, gamma); });
        result.per_step.push_back({gamma, sample_mean(fr), sample_std(fr)});
        return sample_mean(fr);
    };

    const double f0 = eval(0.0);
    if (!(f0 > config.target_fraction))
        throw PreconditionError("gamma scan: gamma = 0 fraction " + std::to_string(f0) +
                                    " does not exceed the target fraction",
                                f0);
    double lo = 0.0;
    double hi = config.bracket_hi;
    const double f_hi = eval(hi);
    if (!(f_hi < config.target_fraction))
        throw BracketingError("gamma scan: fraction at bracket top " + std::to_string(f_hi) +
                                  " does not fall below the target",
                              f0, f_hi);
    while (hi - lo > config.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) >= config.target_fraction)
            lo = mid;
        else
            hi = mid;
    }
    result.threshold = 0.5 * (lo + hi);
    return result;
}

/// Monte Carlo joint Laplace transform E[exp(s sum_i I(x_i))] over replicated
/// interference vectors, with its standard error.
inline EstimateWithCI empirical_joint_laplace(const std::vector<std::vector<double>>& interference_samples,
                                              double s) {
    if (interference_samples.empty()) throw ParameterError("laplace: empty sample set");
    std::vector<double> values;
    values.reserve(interference_samples.size());
    for (const auto& rep : interference_samples) {
        double total = 0.0;
        for (double v : rep) total += v;
        values.push_back(std::exp(s * total));
    }
    return estimate_from_samples(values);
}

namespace detail {

/// Adaptive Simpson on [a, b] with absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                               double fb, double fm, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw IntegrationError("quadrature: maximum refinement depth reached");
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, fm, flm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fb, fm, tol, 60);
}

}  // namespace detail

/// Laplace transform of the Poisson shot-noise at a single location:
/// exp(2 pi lambda int_0^inf (e^{s l(r)} - 1) r dr). The radial integral is
/// evaluated by adaptive quadrature on a truncation interval grown until the
/// analytic tail bound |s| e^{|s| l(R)} int_R^inf r l(r) dr is below 1e-10
/// relative.
inline double poisson_laplace_closed_form(double lambda, const Attenuation& att, double s) {
    if (lambda < 0.0) throw ParameterError("laplace: negative intensity");
    if (!att.integrable())
        throw IntegrationError("laplace: shot-noise integral diverges for alpha <= 2");
    if (lambda == 0.0 || s == 0.0) return 1.0;

    // Dyadic panels keep the integrand resolved near the origin where its
    // mass sits; one long interval would let the Simpson probes miss it.
    // expm1 keeps the far tail, where s*l underflows exp(x) - 1, alive.
    auto integrand = [&](double r) { return std::expm1(s * att(r)) * r; };
    double integral = detail::integrate(integrand, 0.0, 8.0, 1e-14);
    double lo = 8.0;
    bool converged = false;
    for (int iter = 0; iter < 40; ++iter) {
        const double tail =
            std::fabs(s) * std::exp(std::fabs(s) * att(lo)) * att.tail_first_moment(lo);
        if (tail <= 1e-10 * std::max(std::fabs(integral), 1e-30)) {
            converged = true;
            break;
        }
        const double hi = 2.0 * lo;
        integral += detail::integrate(integrand, lo, hi, 1e-14);
        lo = hi;
    }
    if (!converged) throw IntegrationError("laplace: truncation radius did not converge");
    return std::exp(2.0 * std::numbers::pi * lambda * integral);
}

/// Interference field sampled at the centers of an nx-by-ny grid over the
/// window.
inline FieldGrid interference_grid(const PointPattern& pattern, const Window& window, std::int64_t nx,
                                   std::int64_t ny, const SinrParams& params,
                                   Metric metric = Metric::euclidean) {
    if (nx <= 0 || ny <= 0) throw ParameterError("interference grid: sizes must be positive");
    FieldGrid grid;
    grid.nx = nx;
    grid.ny = ny;
    grid.window = window;
    grid.values.assign(static_cast<std::size_t>(nx * ny), 0.0);
    for (std::int64_t iy = 0; iy < ny; ++iy)
        for (std::int64_t ix = 0; ix < nx; ++ix)
            grid.at(ix, iy) = interference_at(pattern, grid.cell_center(ix, iy), params, std::nullopt, metric);
    return grid;
}

}  // namespace subperc
