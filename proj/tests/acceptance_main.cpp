// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "subperc/ordering.hpp"
#include "subperc/percolation.hpp"
#include "subperc/point_process.hpp"
#include "subperc/shot_noise.hpp"
#include "subperc/site_field.hpp"
#include "subperc/spatial_graph.hpp"
#include "subperc/stats.hpp"

using namespace subperc;

namespace {

constexpr std::uint64_t kDefaultMasterSeed = 20260810;
constexpr int kJobs = 0;  // hardware

std::uint64_t acceptance_seed() {
    if (const char* s = std::getenv("SUBPERC_ACCEPT_SEED")) return std::strtoull(s, nullptr, 10);
    return kDefaultMasterSeed;
}
const std::uint64_t kMasterSeed = acceptance_seed();

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// shared setup for the Gilbert scans

ScanConfig fig2_scan_config(const std::string& tag, int replications) {
    ScanConfig cfg;
    cfg.target_fraction = 0.6;
    cfg.tolerance = 0.01;
    cfg.bracket_lo = 0.9;
    cfg.bracket_hi = 1.3;
    cfg.replications = replications;
    cfg.metric = Metric::euclidean;  // free-boundary windows reproduce the reported values
    cfg.jobs = kJobs;
    cfg.seeds = make_replication_seeds(kMasterSeed, tag, static_cast<std::size_t>(replications));
    return cfg;
}

std::vector<ReplicaLaw> scan_laws() {
    return {ReplicaLaw::binomial(1, 1.0), ReplicaLaw::binomial(2, 0.5), ReplicaLaw::binomial(3, 1.0 / 3.0),
            ReplicaLaw::poisson(1.0)};
}

// criterion 1: reported critical ranges of the four replica laws
bool criterion_fig2(std::string& detail) {
    const Lattice lat;
    const Window w = lattice_aligned_window(lat, 40, 23, BoundaryMode::free_boundary);
    const double expected[4] = {1.04, 1.07, 1.09, 1.12};
    bool ok = true;
    int i = 0;
    for (const ReplicaLaw& law : scan_laws()) {
        const ScanConfig cfg = fig2_scan_config("fig2/" + law.name(), 100);
        const ScanResult r = estimate_critical_radius(perturbed_lattice_generator(lat, law, w), cfg);
        const bool in_band = std::fabs(r.threshold - expected[i]) <= 0.03;
        ok = ok && in_band;
        detail += law.name() + "=" + fmt(r.threshold) + (in_band ? "" : "(!)") + " ";
        ++i;
    }
    return ok;
}

// criterion 2: matched Poisson near 1.112, unperturbed lattice at 1.00.
// The Poisson sanity scan runs on a larger torus window: the finite-window
// fraction criterion is biased at Fig-2 scale, and both bias directions
// shrink toward the reference constant as the window grows.
bool criterion_poisson_and_lattice(std::string& detail) {
    const Lattice lat;

    const Window pw = lattice_aligned_window(lat, 80, 46, BoundaryMode::torus);
    ScanConfig cfg = fig2_scan_config("poisson-sanity", 20);
    cfg.metric = Metric::torus;
    const ScanResult rp = estimate_critical_radius(poisson_generator(lat.intensity(), pw), cfg);
    const bool poisson_ok = std::fabs(rp.threshold - 1.112) <= 0.03;
    detail += "poisson=" + fmt(rp.threshold) + (poisson_ok ? "" : "(!)") + " ";

    const Window w = lattice_aligned_window(lat, 40, 23, BoundaryMode::free_boundary);
    GeneratorSpec lattice_gen;
    lattice_gen.window = w;
    lattice_gen.name = "lattice";
    lattice_gen.intensity = lat.intensity();
    lattice_gen.sample = [lat, w](std::uint64_t) { return triangular_lattice_pattern(lat, w); };
    ScanConfig lcfg = fig2_scan_config("lattice-sanity", 1);
    lcfg.replications = 1;
    lcfg.seeds = {1};
    lcfg.bracket_lo = 0.9;
    lcfg.bracket_hi = 1.1;
    const ScanResult rl = estimate_critical_radius(lattice_gen, lcfg);
    const bool lattice_ok = std::fabs(rl.threshold - 1.0) <= lcfg.tolerance;
    detail += "lattice=" + fmt(rl.threshold) + (lattice_ok ? "" : "(!)");
    return poisson_ok && lattice_ok;
}

// criterion 3: mean critical range strictly increasing across the laws
bool criterion_monotone_trend(std::string& detail) {
    const Lattice lat;
    const Window w = lattice_aligned_window(lat, 40, 23, BoundaryMode::free_boundary);
    const int n_master = 20;
    const int reps = 5;
    std::vector<std::vector<double>> rho(4);
    for (int m = 0; m < n_master; ++m) {
        int li = 0;
        for (const ReplicaLaw& law : scan_laws()) {
            ScanConfig cfg = fig2_scan_config("trend/" + law.name(), reps);
            cfg.seeds = make_replication_seeds(derive_seed(kMasterSeed, m), "trend/" + law.name(),
                                               static_cast<std::size_t>(reps));
            const ScanResult r = estimate_critical_radius(perturbed_lattice_generator(lat, law, w), cfg);
            rho[li++].push_back(r.threshold);
        }
    }
    bool ok = true;
    double prev = 0.0;
    for (int li = 0; li < 4; ++li) {
        const double mean = sample_mean(rho[li]);
        if (li > 0 && !(mean > prev)) ok = false;
        detail += fmt(mean) + (li < 3 ? " < " : "");
        prev = mean;
    }
    return ok;
}

// criterion 4: Poisson replicas reduce to the Poisson process
bool criterion_poisson_reduction(std::string& detail) {
    const Lattice lat;
    const Window w = lattice_aligned_window(lat, 24, 14, BoundaryMode::torus);
    const double lambda = lat.intensity();

    int failures = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const PointPattern pat =
            sample_perturbed_lattice(lat, ReplicaLaw::poisson(1.0), w, derive_seed(kMasterSeed, 40, s));
        std::vector<double> observed(16, 0.0);
        for (const Point& p : pat.points) {
            const auto ix = std::min<std::int64_t>(
                3, static_cast<std::int64_t>((p.x - w.x_min) / (w.width() / 4.0)));
            const auto iy = std::min<std::int64_t>(
                3, static_cast<std::int64_t>((p.y - w.y_min) / (w.height() / 4.0)));
            observed[static_cast<std::size_t>(iy * 4 + ix)] += 1.0;
        }
        const std::vector<double> expected(16, lambda * w.area() / 16.0);
        if (chi_square_sf(chi_square_statistic(observed, expected), 16) < 0.01) ++failures;
    }
    const bool chi_ok = failures <= 5;
    detail += "chi2_failures=" + std::to_string(failures) + "/100 ";

    std::vector<double> nn_perturbed, nn_poisson;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const PointPattern a =
            sample_perturbed_lattice(lat, ReplicaLaw::poisson(1.0), w, derive_seed(kMasterSeed, 41, s));
        const PointPattern b = sample_homogeneous_poisson(lambda, w, derive_seed(kMasterSeed, 42, s));
        for (double d : nearest_neighbor_distances(a)) nn_perturbed.push_back(d);
        for (double d : nearest_neighbor_distances(b)) nn_poisson.push_back(d);
    }
    const double p = ks_two_sample_pvalue(nn_perturbed, nn_poisson);
    const bool ks_ok = p > 0.01;
    detail += "ks_p=" + fmt(p);
    return chi_ok && ks_ok;
}

// criterion 5: convex-order suite
bool criterion_convex_order(std::string& detail) {
    const CountDistribution poi = CountDistribution::poisson(1.0);
    bool ok = true;
    for (std::uint32_t n = 1; n <= 10; ++n)
        ok = ok && check_convex_order(CountDistribution::binomial(n, 1.0 / n), poi, 64).ordered;
    detail += ok ? "bin(n,1/n)<=poi ok " : "bin-chain-to-poisson failed ";

    for (std::uint32_t n = 1; n < 10; ++n)
        ok = ok && check_convex_order(CountDistribution::binomial(n, 1.0 / n),
                                      CountDistribution::binomial(n + 1, 1.0 / (n + 1)), 64)
                       .ordered;
    detail += "chain ok ";

    const ConvexOrderResult rev =
        check_convex_order(poi, CountDistribution::binomial(2, 0.5), 64);
    const bool rev_ok = !rev.ordered && rev.witness_k == 1 &&
                        std::fabs(rev.upper_value - 0.25) <= 1e-9 &&
                        std::fabs(rev.lower_value - std::exp(-1.0)) <= 1e-9;
    detail += rev_ok ? "witness k=1 (0.3679 vs 0.25)" : "reversed-direction check failed";
    return ok && rev_ok;
}

// criterion 6: closed-form Poisson cross-checks
bool criterion_closed_forms(std::string& detail) {
    bool ok = true;

    {  // void probability at e^{-pi}
        const Window w = Window::rect(8, 8);
        const auto seeds = make_replication_seeds(kMasterSeed, "accept-void", 2000);
        const EstimateWithCI v = estimate_void_probability(poisson_generator(1.0, w),
                                                           Rect::point_at(4, 4), 1.0, 2000, seeds, kJobs);
        const double ref = std::exp(-std::numbers::pi);
        const bool good = std::fabs(v.value - ref) <= 3.0 * v.std_error;
        ok = ok && good;
        detail += "void=" + fmt(v.value) + (good ? " " : "(!) ");
    }
    {  // Ripley K at pi
        const Window w = Window::rect(50, 50, BoundaryMode::torus);
        std::vector<double> ks(200, 0.0);
        parallel_for(ks.size(), kJobs, [&](std::size_t i) {
            ks[i] = ripley_k(sample_homogeneous_poisson(1.0, w, derive_seed(kMasterSeed, 60, i)), {1.0})[0];
        });
        const EstimateWithCI e = estimate_from_samples(ks);
        const bool good = std::fabs(e.value - std::numbers::pi) <= 3.0 * e.std_error;
        ok = ok && good;
        detail += "K(1)=" + fmt(e.value) + (good ? " " : "(!) ");
    }
    {  // disjoint-box moment ratio at one
        const Window w = Window::rect(10, 10);
        const auto seeds = make_replication_seeds(kMasterSeed, "accept-ji", 2000);
        const EstimateWithCI e = empirical_joint_intensity_ratio(
            poisson_generator(1.0, w), {{1, 3, 1, 3}, {5, 7, 5, 7}}, 2000, seeds, kJobs);
        const bool good = std::fabs(e.value - 1.0) <= 3.0 * e.std_error;
        ok = ok && good;
        detail += "ratio=" + fmt(e.value) + (good ? " " : "(!) ");
    }
    {  // empirical Laplace transform vs quadrature closed form
        const Attenuation att = Attenuation::inverse_poly(4.0);
        SinrParams params;
        params.attenuation = att;
        const Window w = Window::rect(60, 60);
        const Point probe{30.0, 30.0};
        std::vector<double> inter(1500, 0.0);
        parallel_for(inter.size(), kJobs, [&](std::size_t i) {
            inter[i] = interference_at(sample_homogeneous_poisson(1.0, w, derive_seed(kMasterSeed, 61, i)),
                                       probe, params);
        });
        std::vector<std::vector<double>> samples;
        samples.reserve(inter.size());
        for (double v : inter) samples.push_back({v});
        for (double s : {-1.0, 0.5}) {
            const EstimateWithCI e = empirical_joint_laplace(samples, s);
            const double ref = poisson_laplace_closed_form(1.0, att, s);
            const bool good = std::fabs(e.value - ref) <= 3.0 * e.std_error;
            ok = ok && good;
            detail += "LT(" + fmt(s) + ")=" + fmt(e.value) + "/" + fmt(ref) + (good ? " " : "(!) ");
        }
    }
    return ok;
}

// criterion 7: sub-Poisson ordering fingerprints of the Bin(1,1) lattice
bool criterion_ordering_fingerprints(std::string& detail) {
    const Lattice lat;
    const double lam = lat.intensity();
    bool ok = true;

    {  // smaller void probability
        const Window w = lattice_aligned_window(lat, 12, 7, BoundaryMode::free_boundary);
        const auto seeds_a = make_replication_seeds(kMasterSeed, "fp-void-a", 2000);
        const auto seeds_b = make_replication_seeds(kMasterSeed, "fp-void-b", 2000);
        const EstimateWithCI sub = estimate_void_probability(
            perturbed_lattice_generator(lat, ReplicaLaw::binomial(1, 1.0), w), Rect::point_at(6, 6), 0.5,
            2000, seeds_a, kJobs);
        const EstimateWithCI poi = estimate_void_probability(poisson_generator(lam, w),
                                                             Rect::point_at(6, 6), 0.5, 2000, seeds_b, kJobs);
        const double joint = std::sqrt(sub.std_error * sub.std_error + poi.std_error * poi.std_error);
        const bool good = sub.value <= poi.value + 3.0 * joint;
        ok = ok && good;
        detail += "void " + fmt(sub.value) + "<=" + fmt(poi.value) + (good ? " " : "(!) ");
    }
    {  // smaller Ripley K
        const Window w = lattice_aligned_window(lat, 30, 17, BoundaryMode::torus);
        std::vector<double> sub_k(100, 0.0), poi_k(100, 0.0);
        parallel_for(sub_k.size(), kJobs, [&](std::size_t i) {
            sub_k[i] = ripley_k(sample_perturbed_lattice(lat, ReplicaLaw::binomial(1, 1.0), w,
                                                         derive_seed(kMasterSeed, 70, i)),
                                {0.5})[0];
            poi_k[i] =
                ripley_k(sample_homogeneous_poisson(lam, w, derive_seed(kMasterSeed, 71, i)), {0.5})[0];
        });
        const EstimateWithCI es = estimate_from_samples(sub_k);
        const EstimateWithCI ep = estimate_from_samples(poi_k);
        const double joint = std::sqrt(es.std_error * es.std_error + ep.std_error * ep.std_error);
        const bool good = es.value <= ep.value + 3.0 * joint;
        ok = ok && good;
        detail += "K " + fmt(es.value) + "<=" + fmt(ep.value) + (good ? " " : "(!) ");
    }
    {  // smaller joint Laplace transform at every probe setup
        const Window w = lattice_aligned_window(lat, 30, 17, BoundaryMode::free_boundary);
        SinrParams params;
        const std::vector<Point> probes = {{15.0, 14.5}, {17.0, 14.5}, {15.0, 16.5}, {17.0, 16.5}};
        const int reps = 800;
        std::vector<std::vector<double>> sub_i(reps), poi_i(reps);
        parallel_for(static_cast<std::size_t>(reps), kJobs, [&](std::size_t i) {
            const PointPattern a = sample_perturbed_lattice(lat, ReplicaLaw::binomial(1, 1.0), w,
                                                            derive_seed(kMasterSeed, 72, i));
            const PointPattern b = sample_homogeneous_poisson(lam, w, derive_seed(kMasterSeed, 73, i));
            for (const Point& probe : probes) {
                sub_i[i].push_back(interference_at(a, probe, params));
                poi_i[i].push_back(interference_at(b, probe, params));
            }
        });
        for (const int n : {1, 2, 4}) {
            std::vector<std::vector<double>> sub_n(reps), poi_n(reps);
            for (int i = 0; i < reps; ++i) {
                sub_n[i].assign(sub_i[i].begin(), sub_i[i].begin() + n);
                poi_n[i].assign(poi_i[i].begin(), poi_i[i].begin() + n);
            }
            for (const double s : {-1.0, -0.5, 0.5}) {
                const EstimateWithCI es = empirical_joint_laplace(sub_n, s);
                const EstimateWithCI ep = empirical_joint_laplace(poi_n, s);
                const double joint = std::sqrt(es.std_error * es.std_error + ep.std_error * ep.std_error);
                if (!(es.value <= ep.value + 3.0 * joint)) {
                    ok = false;
                    detail += "LT(n=" + std::to_string(n) + ",s=" + fmt(s) + ")(!) ";
                }
            }
        }
        if (ok) detail += "LT sub<=poi for all (n,s)";
    }
    return ok;
}

// criterion 8: exact SINR structure
bool criterion_sinr_structural(std::string& detail) {
    SinrParams p;
    p.P = 1.0;
    p.N = 0.5;
    p.T = 1.0;
    p.gamma = 0.0;
    bool ok = true;

    // snr_range inversion identity
    const double rho_l = snr_range(p);
    const bool inv_ok = std::fabs(p.attenuation(rho_l) - p.T * p.N / p.P) <= 1e-12;
    ok = ok && inv_ok;
    detail += std::string("inversion") + (inv_ok ? " " : "(!) ");

    // gamma = 0 edge-set equality on 100 random instances
    bool eq_ok = true;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Window w = Window::rect(12, 12);
        const PointPattern backbone = sample_homogeneous_poisson(1.0, w, derive_seed(kMasterSeed, 80, s));
        const PointPattern inter = sample_homogeneous_poisson(1.0, w, derive_seed(kMasterSeed, 81, s));
        const SpatialGraph sinr = build_sinr_graph(backbone, inter, p);
        const SpatialGraph gilbert = build_gilbert(backbone, rho_l, Metric::euclidean, EdgeRule::open);
        eq_ok = eq_ok && sinr.edges == gilbert.edges;
    }
    ok = ok && eq_ok;
    detail += std::string("gamma0-equality") + (eq_ok ? " " : "(!) ");

    // monotone edge sets in gamma
    {
        const Window w = Window::rect(15, 15);
        const PointPattern backbone = sample_homogeneous_poisson(1.2, w, derive_seed(kMasterSeed, 82));
        const PointPattern inter = sample_homogeneous_poisson(1.2, w, derive_seed(kMasterSeed, 83));
        std::vector<std::pair<std::uint32_t, std::uint32_t>> prev;
        bool mono_ok = true;
        bool first = true;
        for (const double g : {0.0, 0.05, 0.2, 1.0}) {
            SinrParams pg = p;
            pg.gamma = g;
            const SpatialGraph graph = build_sinr_graph(backbone, inter, pg);
            if (!first) {
                for (const auto& e : graph.edges)
                    mono_ok = mono_ok && std::binary_search(prev.begin(), prev.end(), e);
            }
            prev = graph.edges;
            first = false;
        }
        ok = ok && mono_ok;
        detail += std::string("gamma-monotone") + (mono_ok ? " " : "(!) ");
    }

    // three-node hand instance
    {
        const Window w = Window::rect(1, 1);
        PointPattern backbone;
        backbone.window = w;
        backbone.points = {{0.0, 0.0}, {0.1, 0.0}};
        PointPattern interferer;
        interferer.window = w;
        interferer.points = {{0.1, 0.05}};
        SinrParams p0 = p;
        const bool at0 = build_sinr_graph(backbone, interferer, p0).edges.size() == 1;
        p0.gamma = 10.0;
        const bool at10 = build_sinr_graph(backbone, interferer, p0).edges.empty();
        ok = ok && at0 && at10;
        detail += std::string("3-node") + (at0 && at10 ? "" : "(!)");
    }
    return ok;
}

// criterion 9: positive gamma_c across master seeds, nonincreasing curves
bool criterion_gamma_positivity(std::string& detail) {
    const double lam = 2.0 / std::sqrt(3.0);
    const Window w = Window::rect(30, 30, BoundaryMode::torus);
    SinrParams p;
    p.P = 1.0;
    p.T = 1.0;
    p.N = std::pow(2.2, -4.0);  // snr range 1.2
    double min_gamma = 1e9;
    for (int m = 0; m < 10; ++m) {
        ScanConfig cfg;
        cfg.bracket_lo = 0.0;
        cfg.bracket_hi = 0.1;
        cfg.tolerance = 0.002;
        cfg.replications = 5;
        cfg.jobs = kJobs;
        cfg.seeds = make_replication_seeds(derive_seed(kMasterSeed, 90, m), "gamma", 5);
        const ScanResult r = estimate_gamma_c(poisson_generator(lam, w), poisson_generator(lam, w), p, cfg,
                                              Metric::torus);
        if (!(r.threshold > 0.0)) {
            detail += "gamma_c<=0 at master " + std::to_string(m);
            return false;
        }
        auto steps = r.per_step;
        std::sort(steps.begin(), steps.end(),
                  [](const ScanStep& a, const ScanStep& b) { return a.param < b.param; });
        for (std::size_t i = 1; i < steps.size(); ++i) {
            if (steps[i].mean_fraction > steps[i - 1].mean_fraction + 1e-12) {
                detail += "curve not monotone at master " + std::to_string(m);
                return false;
            }
        }
        min_gamma = std::min(min_gamma, r.threshold);
    }
    detail += "min gamma_c=" + fmt(min_gamma) + " over 10 seeds, curves nonincreasing";
    return true;
}

// exhaustive enumeration oracle: open self-avoiding site paths from the origin
long count_open_paths(const SiteField& f, std::int64_t ox, std::int64_t oy, int n) {
    if (!f.is_open(ox, oy)) return 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> path = {{ox, oy}};
    std::function<long(int)> rec = [&](int remaining) -> long {
        if (remaining == 0) return 1;
        long total = 0;
        const auto [cx, cy] = path.back();
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const std::int64_t nx = cx + dx;
                const std::int64_t ny = cy + dy;
                if (!f.is_open(nx, ny)) continue;
                bool visited = false;
                for (const auto& [px, py] : path) visited = visited || (px == nx && py == ny);
                if (visited) continue;
                path.push_back({nx, ny});
                total += rec(remaining - 1);
                path.pop_back();
            }
        }
        return total;
    };
    return rec(n - 1);
}

// criterion 10: analytic bounds plus the discretization sandwich
bool criterion_analytic_bounds(std::string& detail) {
    bool ok = true;

    // lower_bound_radius against the formula, and the unit-base identity
    const double lam_lattice = 2.0 / std::sqrt(3.0);
    const double c = lower_bound_radius(lam_lattice, 2);
    const double formula = 0.5 / std::sqrt((std::pow(3.0, 2) - 2.0) * lam_lattice);
    const bool c_ok = std::fabs(c - formula) <= 1e-6 && std::fabs(c - 0.17588) <= 5e-5;
    ok = ok && c_ok;
    detail += "c(2/sqrt3)=" + fmt(c) + (c_ok ? " " : "(!) ");
    const bool base_ok = std::fabs(expected_path_count_bound(lam_lattice, c, 1, 2) - 1.0) <= 1e-12;
    ok = ok && base_ok;
    detail += std::string("base=1") + (base_ok ? " " : "(!) ");

    // Monte Carlo open-path counts never exceed the bound
    {
        // r sits inside the geometric-decay regime (base 7 lambda (2r)^2 < 1)
        // and is large enough that the 200-seed mean is far from the bound
        const double lambda = 1.0;
        const double r = 0.15;
        const Window w{-3.0, 3.0, -3.0, 3.0, BoundaryMode::free_boundary};
        bool mc_ok = true;
        for (const int n : {2, 3, 4}) {
            double mean = 0.0;
            for (std::uint64_t s = 0; s < 200; ++s) {
                const PointPattern pat =
                    sample_homogeneous_poisson(lambda, w, derive_seed(kMasterSeed, 100, s));
                const SiteField f = site_percolation_field(pat, 2.0 * r);
                const auto ox = -static_cast<std::int64_t>(std::ceil(w.x_min / (2.0 * r) - 0.5));
                const auto oy = -static_cast<std::int64_t>(std::ceil(w.y_min / (2.0 * r) - 0.5));
                mean += static_cast<double>(count_open_paths(f, ox, oy, n));
            }
            mean /= 200.0;
            mc_ok = mc_ok && mean <= expected_path_count_bound(lambda, r, n, 2);
        }
        ok = ok && mc_ok;
        detail += std::string("path-counts<=bound") + (mc_ok ? " " : "(!) ");
    }

    // per-realization discretization sandwich over 100 realizations
    {
        const Window w = Window::rect(20, 20);
        bool sandwich_ok = true;
        for (std::uint64_t s = 0; s < 100; ++s) {
            const PointPattern pat = sample_homogeneous_poisson(1.0, w, derive_seed(kMasterSeed, 101, s));
            for (const double r : {0.3, 0.55, 0.8})
                sandwich_ok = sandwich_ok && check_discretization_sandwich(pat, r);
        }
        ok = ok && sandwich_ok;
        detail += std::string("sandwich") + (sandwich_ok ? " ok" : "(!)");
    }
    return ok;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "fig2 scan critical ranges (Bin(1,1), Bin(2,1/2), Bin(3,1/3), Poi(1))", criterion_fig2},
        {2, "Poisson 1.112 and lattice 1.00 sanity", criterion_poisson_and_lattice},
        {3, "monotone trend of the mean critical range over 20 master seeds", criterion_monotone_trend},
        {4, "Poisson reduction: chi-square cells and KS nearest neighbors", criterion_poisson_reduction},
        {5, "convex-order suite", criterion_convex_order},
        {6, "closed-form Poisson checks (void, K, moments, Laplace)", criterion_closed_forms},
        {7, "sub-Poisson ordering fingerprints (void, K, Laplace)", criterion_ordering_fingerprints},
        {8, "SINR structural suite", criterion_sinr_structural},
        {9, "gamma_c positivity across 10 master seeds", criterion_gamma_positivity},
        {10, "analytic bounds and discretization sandwich", criterion_analytic_bounds},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        const auto t0 = std::chrono::steady_clock::now();
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail += std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d (%5.1fs): %s — %s\n", pass ? "PASS" : "FAIL", c.id, secs,
                    c.name.c_str(), detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
