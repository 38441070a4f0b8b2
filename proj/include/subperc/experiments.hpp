#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "subperc/config.hpp"
#include "subperc/errors.hpp"
#include "subperc/io.hpp"
#include "subperc/ordering.hpp"
#include "subperc/percolation.hpp"
#include "subperc/point_process.hpp"
#include "subperc/shot_noise.hpp"
#include "subperc/svg.hpp"
#include "subperc/version.hpp"

namespace subperc {

inline const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "experiment", "master_seed", "out_dir", "jobs",
        "lattice.spacing", "lattice.nx", "lattice.ny_pairs",
        "window.mode", "window.width", "window.height",
        "scan.target_fraction", "scan.tolerance", "scan.lo", "scan.hi",
        "scan.replications", "scan.check_sandwich",
        "sinr.P", "sinr.N", "sinr.T", "sinr.alpha", "sinr.attenuation", "sinr.r0",
        "sinr.backbone_intensity", "sinr.interferer_intensity",
        "bounds.lambdas", "bounds.d", "bounds.reference_rho",
        "diagnostics.replications",
        "svg.pixels_per_unit",
    };
    return keys;
}

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "fig1_patterns", "fig2_gilbert_scan", "sinr_gamma_scan", "diagnostics_suite", "bounds_table"};
    return names;
}

/// Fully parsed experiment setup; construction validates everything before
/// any computation starts.
struct ExperimentConfig {
    KeyValueConfig raw;
    std::string experiment;
    std::uint64_t master_seed = 1;
    std::filesystem::path out_dir = "run";
    int jobs = 0;

    static ExperimentConfig from_file(const std::string& path) {
        return finish(KeyValueConfig::parse_file(path, known_config_keys()));
    }

    static ExperimentConfig from_text(const std::string& text) {
        return finish(KeyValueConfig::parse_text(text, known_config_keys()));
    }

    BoundaryMode window_mode(const std::string& fallback = "torus") const {
        const std::string m = raw.get_string("window.mode", fallback);
        if (m == "torus") return BoundaryMode::torus;
        if (m == "free") return BoundaryMode::free_boundary;
        throw ConfigError("window.mode must be 'torus' or 'free'");
    }

    Lattice lattice() const {
        Lattice lat;
        lat.spacing = raw.get_real("lattice.spacing", 1.0);
        lat.validate();
        return lat;
    }

    Window lattice_window(int default_nx, int default_ny_pairs,
                          const std::string& default_mode = "torus") const {
        const Lattice lat = lattice();
        const int nx = static_cast<int>(raw.get_int("lattice.nx", default_nx));
        const int ny = static_cast<int>(raw.get_int("lattice.ny_pairs", default_ny_pairs));
        return lattice_aligned_window(lat, nx, ny, window_mode(default_mode));
    }

    Attenuation attenuation() const {
        const std::string fam = raw.get_string("sinr.attenuation", "inverse_poly");
        const double alpha = raw.get_real("sinr.alpha", 4.0);
        if (fam == "inverse_poly") return Attenuation::inverse_poly(alpha);
        if (fam == "truncated_power")
            return Attenuation::truncated_power(alpha, raw.get_real("sinr.r0", 1.0));
        throw ConfigError("sinr.attenuation must be 'inverse_poly' or 'truncated_power'");
    }

private:
    static ExperimentConfig finish(KeyValueConfig cfg) {
        ExperimentConfig ec;
        ec.raw = std::move(cfg);
        ec.experiment = ec.raw.require_string("experiment");
        bool known = false;
        for (const auto& n : experiment_names()) known = known || n == ec.experiment;
        if (!known) throw ConfigError("unknown experiment '" + ec.experiment + "'");
        ec.master_seed = ec.raw.get_u64("master_seed", 1);
        ec.out_dir = ec.raw.get_string("out_dir", "run");
        ec.jobs = static_cast<int>(ec.raw.get_int("jobs", 0));
        ec.window_mode();   // validate eagerly
        ec.attenuation();
        return ec;
    }
};

/// Wall-clock per named stage, recorded into the manifest.
class StageClock {
public:
    void start(const std::string& name) {
        stage_ = name;
        t0_ = std::chrono::steady_clock::now();
    }
    void stop() {
        const auto dt = std::chrono::steady_clock::now() - t0_;
        stages_.emplace_back(stage_, std::chrono::duration<double>(dt).count());
    }
    const std::vector<std::pair<std::string, double>>& stages() const { return stages_; }

private:
    std::string stage_;
    std::chrono::steady_clock::time_point t0_;
    std::vector<std::pair<std::string, double>> stages_;
};

/// Everything needed to reproduce a run byte for byte: resolved config,
/// derived per-replication seeds, tool version, stage timings.
struct RunManifest {
    const ExperimentConfig& config;
    std::vector<std::pair<std::string, std::vector<std::uint64_t>>> seed_groups;
    StageClock clock;

    void add_seeds(const std::string& group, const std::vector<std::uint64_t>& seeds) {
        seed_groups.emplace_back(group, seeds);
    }

    void write(const std::filesystem::path& path) const {
        nlohmann::json j;
        j["tool"] = "subperc";
        j["version"] = kVersion;
        j["experiment"] = config.experiment;
        j["master_seed"] = config.master_seed;
        nlohmann::json cfg = nlohmann::json::object();
        for (const auto& [k, v] : config.raw.entries()) cfg[k] = v;
        j["config"] = cfg;
        nlohmann::json seeds = nlohmann::json::object();
        for (const auto& [g, s] : seed_groups) seeds[g] = s;
        j["replication_seeds"] = seeds;
        nlohmann::json stages = nlohmann::json::array();
        for (const auto& [name, secs] : clock.stages())
            stages.push_back({{"stage", name}, {"seconds", secs}});
        j["wall_clock"] = stages;
        std::ofstream out = open_output(path);
        out << j.dump(2) << '\n';
        if (!out) throw IoError("write failed: " + path.string());
    }
};

namespace detail {

inline std::string sanitize_name(std::string s) {
    for (char& c : s)
        if (c == '(' || c == ')' || c == ',' || c == '/') c = '_';
    return s;
}

/// The four replica laws scanned in the Gilbert-graph figure.
inline std::vector<ReplicaLaw> fig2_laws() {
    return {ReplicaLaw::binomial(1, 1.0), ReplicaLaw::binomial(2, 0.5), ReplicaLaw::binomial(3, 1.0 / 3.0),
            ReplicaLaw::poisson(1.0)};
}

inline void render_pattern_svg(const PointPattern& pattern, const std::filesystem::path& path,
                               double px_per_unit, const std::string& caption) {
    SvgCanvas svg(pattern.window, px_per_unit);
    for (const Point& p : pattern.points) svg.circle(p, 0.22 * px_per_unit, "pt");
    if (!caption.empty()) svg.text_px(4.0, 12.0, caption, 11.0);
    svg.save(path);
}

/// Gilbert graph scatter with the largest component highlighted and an inset
/// bar plot of the ten largest component fractions.
inline void render_graph_svg(const PointPattern& pattern, const SpatialGraph& graph,
                             const ComponentStats& stats, const std::filesystem::path& path,
                             double px_per_unit, const std::string& caption) {
    // label of the largest component; labels are compact, so tally once
    std::uint32_t largest_label = 0;
    {
        std::vector<std::uint32_t> size_of_label;
        for (std::size_t v = 0; v < stats.labels.size(); ++v) {
            if (stats.labels[v] >= size_of_label.size()) size_of_label.resize(stats.labels[v] + 1, 0);
            ++size_of_label[stats.labels[v]];
        }
        std::uint32_t best = 0;
        for (std::uint32_t l = 0; l < size_of_label.size(); ++l)
            if (size_of_label[l] > best) {
                best = size_of_label[l];
                largest_label = l;
            }
    }

    SvgCanvas svg(pattern.window, px_per_unit);
    for (const auto& [i, j] : graph.edges) {
        const bool wraps = graph.metric == Metric::torus &&
                           euclidean_sq_distance(pattern.points[i], pattern.points[j]) >
                               torus_sq_distance(pattern.points[i], pattern.points[j], pattern.window) + 1e-12;
        if (wraps) continue;  // do not draw seam-crossing segments across the picture
        const bool hl = stats.labels[i] == largest_label;
        svg.line(pattern.points[i], pattern.points[j], hl ? "edge-largest" : "edge");
    }
    for (std::size_t v = 0; v < pattern.points.size(); ++v)
        svg.circle(pattern.points[v], 0.16 * px_per_unit,
                   stats.labels[v] == largest_label ? "pt-largest" : "pt");

    // inset: ten largest component fractions
    const double inset_w = 0.22 * svg.width_px();
    const double inset_h = 0.14 * svg.height_px();
    const double x0 = 8.0;
    const double y0 = 20.0;
    const double bar_w = inset_w / 10.0;
    for (std::size_t k = 0; k < stats.top10_fractions.size(); ++k) {
        const double h = stats.top10_fractions[k] * inset_h;
        svg.bar_px(x0 + static_cast<double>(k) * bar_w, y0 + inset_h - h, bar_w * 0.8, h, "bar");
    }
    if (!caption.empty()) svg.text_px(4.0, 12.0, caption, 11.0);
    svg.save(path);
}

}  // namespace detail

/// Fig. 1 pipeline: one pattern per generator on a common window and master
/// seed, emitted as CSV + sidecar + SVG scatter.
inline void run_fig1_patterns(const ExperimentConfig& ec, RunManifest& manifest) {
    const Window window = ec.lattice_window(12, 7);
    const Lattice lat = ec.lattice();
    const double px = ec.raw.get_real("svg.pixels_per_unit", 24.0);

    struct Panel {
        std::string name;
        PointPattern pattern;
    };
    std::vector<Panel> panels;
    panels.push_back({"lattice", triangular_lattice_pattern(lat, window)});

    const std::vector<ReplicaLaw> laws = {ReplicaLaw::binomial(1, 1.0), ReplicaLaw::binomial(2, 0.5),
                                          ReplicaLaw::binomial(3, 1.0 / 3.0), ReplicaLaw::poisson(1.0),
                                          ReplicaLaw::cox_bernoulli(5.0)};
    std::vector<std::uint64_t> seeds;
    for (std::size_t k = 0; k < laws.size(); ++k)
        seeds.push_back(derive_seed(ec.master_seed, fnv1a("fig1"), k));
    manifest.add_seeds("fig1_panels", seeds);

    for (std::size_t k = 0; k < laws.size(); ++k)
        panels.push_back({laws[k].name(), sample_perturbed_lattice(lat, laws[k], window, seeds[k])});

    for (const Panel& p : panels) {
        const std::string stem = detail::sanitize_name(p.name);
        write_pattern_csv(p.pattern, ec.out_dir / "patterns" / (stem + ".csv"));
        write_pattern_sidecar(p.pattern, ec.out_dir / "patterns" / (stem + ".json"));
        detail::render_pattern_svg(p.pattern, ec.out_dir / "figures" / (stem + ".svg"), px, p.name);
    }
}

/// Fig. 2 pipeline: critical-range scan per replica law, graph render at the
/// estimate with the largest component highlighted, and the top-10 component
/// fraction table.
inline void run_fig2_scan(const ExperimentConfig& ec, RunManifest& manifest) {
    // free boundary by default: the reported critical ranges come from plain
    // windows, and torus wrap shifts them down by a few hundredths
    const Window window = ec.lattice_window(40, 23, "free");
    const Lattice lat = ec.lattice();
    const double px = ec.raw.get_real("svg.pixels_per_unit", 14.0);

    ScanConfig scan;
    scan.target_fraction = ec.raw.get_real("scan.target_fraction", 0.6);
    scan.tolerance = ec.raw.get_real("scan.tolerance", 0.01);
    scan.bracket_lo = ec.raw.get_real("scan.lo", 0.9);
    scan.bracket_hi = ec.raw.get_real("scan.hi", 1.3);
    scan.replications = static_cast<int>(ec.raw.get_int("scan.replications", 10));
    scan.metric = window.mode == BoundaryMode::torus ? Metric::torus : Metric::euclidean;
    scan.check_sandwich = ec.raw.get_int("scan.check_sandwich", 1) != 0;
    scan.jobs = ec.jobs;

    std::ofstream rho_table = open_output(ec.out_dir / "tables" / "rho_estimates.csv");
    rho_table << "generator,rho_hat,target_fraction,tolerance,replications\n";

    for (const ReplicaLaw& law : detail::fig2_laws()) {
        const std::string stem = detail::sanitize_name(law.name());
        ScanConfig cfg = scan;
        cfg.seeds = make_replication_seeds(ec.master_seed, "fig2/" + law.name(),
                                           static_cast<std::size_t>(scan.replications));
        manifest.add_seeds("fig2/" + law.name(), cfg.seeds);

        const GeneratorSpec gen = perturbed_lattice_generator(lat, law, window);
        const ScanResult result = estimate_critical_radius(gen, cfg);
        write_scan_csv(result, ec.out_dir / "tables" / ("scan_" + stem + ".csv"));
        write_scan_summary_json(result, ec.out_dir / "tables" / ("scan_" + stem + ".json"));
        // sanitized name keeps the CSV free of embedded commas
        rho_table << stem << ',' << fmt_double(result.threshold) << ','
                  << fmt_double(cfg.target_fraction) << ',' << fmt_double(cfg.tolerance) << ','
                  << cfg.replications << '\n';

        // display realization at the estimated range
        const std::uint64_t display_seed = derive_seed(ec.master_seed, fnv1a("fig2-display"), fnv1a(law.name()));
        const PointPattern pattern = gen.sample(display_seed);
        const SpatialGraph graph = build_gilbert(pattern, result.threshold, cfg.metric);
        const ComponentStats stats = connected_components(graph);
        detail::render_graph_svg(pattern, graph, stats, ec.out_dir / "figures" / (stem + ".svg"), px,
                                 law.name() + ", rho=" + fmt_double(result.threshold));
        write_pattern_csv(pattern, ec.out_dir / "patterns" / (stem + ".csv"));
        write_pattern_sidecar(pattern, ec.out_dir / "patterns" / (stem + ".json"));
        write_edges_csv(graph, ec.out_dir / "tables" / ("edges_" + stem + ".csv"));
        write_components_csv(stats, ec.out_dir / "tables" / ("components_" + stem + ".csv"));
        std::ofstream top10 = open_output(ec.out_dir / "tables" / ("top10_" + stem + ".csv"));
        top10 << "rank,fraction\n";
        for (std::size_t k = 0; k < stats.top10_fractions.size(); ++k)
            top10 << (k + 1) << ',' << fmt_double(stats.top10_fractions[k]) << '\n';
        if (!top10) throw IoError("write failed: top10 table");
    }
    if (!rho_table) throw IoError("write failed: rho table");
}

/// Gamma-threshold scan of the SINR graph over Poisson backbone and
/// interferers, with the per-gamma fraction curve and one interference grid.
inline void run_sinr_gamma_scan(const ExperimentConfig& ec, RunManifest& manifest) {
    const double width = ec.raw.get_real("window.width", 30.0);
    const double height = ec.raw.get_real("window.height", 30.0);
    Window window{0.0, width, 0.0, height, ec.window_mode()};
    window.validate();

    SinrParams params;
    params.P = ec.raw.get_real("sinr.P", 1.0);
    params.T = ec.raw.get_real("sinr.T", 1.0);
    // default noise puts the SNR range at 1.2 lattice spacings
    params.N = ec.raw.get_real("sinr.N", std::pow(2.2, -4.0));
    params.gamma = 0.0;
    params.attenuation = ec.attenuation();
    params.validate();

    const double lambda_b = ec.raw.get_real("sinr.backbone_intensity", 2.0 / std::sqrt(3.0));
    const double lambda_i = ec.raw.get_real("sinr.interferer_intensity", 2.0 / std::sqrt(3.0));
    const GeneratorSpec backbone = poisson_generator(lambda_b, window);
    const GeneratorSpec interferers = poisson_generator(lambda_i, window);

    ScanConfig scan;
    scan.target_fraction = ec.raw.get_real("scan.target_fraction", 0.6);
    scan.tolerance = ec.raw.get_real("scan.tolerance", 0.002);
    scan.bracket_lo = 0.0;
    scan.bracket_hi = ec.raw.get_real("scan.hi", 0.1);
    scan.replications = static_cast<int>(ec.raw.get_int("scan.replications", 5));
    scan.metric = window.mode == BoundaryMode::torus ? Metric::torus : Metric::euclidean;
    scan.jobs = ec.jobs;
    scan.seeds = make_replication_seeds(ec.master_seed, "sinr_gamma", static_cast<std::size_t>(scan.replications));
    manifest.add_seeds("sinr_gamma", scan.seeds);

    const ScanResult result = estimate_gamma_c(backbone, interferers, params, scan, scan.metric);
    write_scan_csv(result, ec.out_dir / "tables" / "gamma_scan.csv");
    write_scan_summary_json(result, ec.out_dir / "tables" / "gamma_summary.json");

    // one interference realization for the record
    const PointPattern sample = interferers.sample(derive_seed(scan.seeds[0], 2));
    const FieldGrid grid = interference_grid(sample, window, 40, 40, params, scan.metric);
    write_field_grid_csv(grid, ec.out_dir / "tables" / "interference_grid.csv");
}

/// Ordering-diagnostics report: closed-form Poisson cross-checks and the
/// sub-Poisson fingerprints of the Bin(1,1) perturbed lattice.
inline void run_diagnostics_suite(const ExperimentConfig& ec, RunManifest& manifest) {
    std::vector<DiagnosticRow> rows;
    const int reps = static_cast<int>(ec.raw.get_int("diagnostics.replications", 1500));
    const int jobs = ec.jobs;
    const double lam = 2.0 / std::sqrt(3.0);
    const Lattice lat = ec.lattice();

    const auto seeds_a = make_replication_seeds(ec.master_seed, "diag-a", static_cast<std::size_t>(reps));
    const auto seeds_b = make_replication_seeds(ec.master_seed, "diag-b", static_cast<std::size_t>(reps));
    manifest.add_seeds("diag-a", seeds_a);
    manifest.add_seeds("diag-b", seeds_b);

    {  // Poisson void probability against exp(-pi)
        const Window w = Window::rect(8.0, 8.0);
        const GeneratorSpec gen = poisson_generator(1.0, w);
        const Rect b = Rect::point_at(4.0, 4.0);
        const EstimateWithCI v = estimate_void_probability(gen, b, 1.0, reps, seeds_a, jobs);
        const double ref = std::exp(-std::numbers::pi);
        rows.push_back({"void_probability", "poisson_lambda=1_point_r=1", v.value, v.std_error, ref,
                        std::fabs(v.value - ref) <= 3.0 * v.std_error});
    }
    {  // void ordering: Bin(1,1) perturbed lattice below matched Poisson
        const Window w = lattice_aligned_window(lat, 12, 7, BoundaryMode::free_boundary);
        const GeneratorSpec sub =
            perturbed_lattice_generator(lat, ReplicaLaw::binomial(1, 1.0), w);
        const GeneratorSpec poi = poisson_generator(lam, w);
        const Rect b = Rect::point_at(6.0, 6.0);
        const EstimateWithCI vs = estimate_void_probability(sub, b, 0.5, reps, seeds_a, jobs);
        const EstimateWithCI vp = estimate_void_probability(poi, b, 0.5, reps, seeds_b, jobs);
        const double joint = std::sqrt(vs.std_error * vs.std_error + vp.std_error * vp.std_error);
        rows.push_back({"void_ordering", "bin11_vs_poisson_r=0.5", vs.value, vs.std_error, vp.value,
                        vs.value <= vp.value + 3.0 * joint});
    }
    {  // Ripley K of Poisson at r=1 against pi
        const Window w = Window::rect(50.0, 50.0, BoundaryMode::torus);
        const int k_seeds = std::min(reps, 100);
        std::vector<double> ks(static_cast<std::size_t>(k_seeds), 0.0);
        parallel_for(ks.size(), jobs, [&](std::size_t i) {
            const PointPattern pat = sample_homogeneous_poisson(1.0, w, seeds_a[i]);
            ks[i] = ripley_k(pat, {1.0})[0];
        });
        const EstimateWithCI e = estimate_from_samples(ks);
        rows.push_back({"ripley_k", "poisson_lambda=1_r=1", e.value, e.std_error, std::numbers::pi,
                        std::fabs(e.value - std::numbers::pi) <= 3.0 * e.std_error});
    }
    {  // Ripley ordering at r=0.5: perturbed lattice clusters less
        const Window w = lattice_aligned_window(lat, 30, 17, BoundaryMode::torus);
        const int k_seeds = std::min(reps, 100);
        std::vector<double> ks(static_cast<std::size_t>(k_seeds), 0.0);
        parallel_for(ks.size(), jobs, [&](std::size_t i) {
            const PointPattern pat =
                sample_perturbed_lattice(lat, ReplicaLaw::binomial(1, 1.0), w, seeds_b[i]);
            ks[i] = ripley_k(pat, {0.5})[0];
        });
        const EstimateWithCI e = estimate_from_samples(ks);
        const double ref = std::numbers::pi * 0.25;
        rows.push_back({"ripley_k_ordering", "bin11_r=0.5", e.value, e.std_error, ref,
                        e.value + 3.0 * e.std_error < ref});
    }
    {  // disjoint-box moment ratio of Poisson
        const Window w = Window::rect(10.0, 10.0);
        const GeneratorSpec gen = poisson_generator(1.0, w);
        const std::vector<Rect> boxes = {{1.0, 3.0, 1.0, 3.0}, {5.0, 7.0, 5.0, 7.0}};
        const EstimateWithCI e = empirical_joint_intensity_ratio(gen, boxes, reps, seeds_a, jobs);
        rows.push_back({"joint_intensity_ratio", "poisson_k=2", e.value, e.std_error, 1.0,
                        std::fabs(e.value - 1.0) <= 3.0 * e.std_error});
    }
    {  // adjacent-box ratio of the Bin(1,1) perturbed lattice: below one.
        // Half-spacing boxes stacked across a lattice row give the strongest
        // exclusion signal per replication.
        const Window w = lattice_aligned_window(lat, 12, 7, BoundaryMode::torus);
        const GeneratorSpec gen = perturbed_lattice_generator(lat, ReplicaLaw::binomial(1, 1.0), w);
        const std::vector<Rect> boxes = {{4.5, 5.0, 4.5, 5.0}, {4.5, 5.0, 5.0, 5.5}};
        const int reps_ji = std::max(reps, 4000);
        const auto seeds_ji =
            make_replication_seeds(ec.master_seed, "diag-ji", static_cast<std::size_t>(reps_ji));
        const EstimateWithCI e = empirical_joint_intensity_ratio(gen, boxes, reps_ji, seeds_ji, jobs);
        rows.push_back({"joint_intensity_ratio", "bin11_adjacent_k=2", e.value, e.std_error, 1.0,
                        e.value + 3.0 * e.std_error < 1.0});
    }
    {  // empirical Laplace transform of Poisson interference vs closed form
        const Window w = Window::rect(40.0, 40.0);
        SinrParams params;
        params.attenuation = ec.attenuation();
        const Point probe{20.0, 20.0};
        std::vector<double> values(static_cast<std::size_t>(reps), 0.0);
        parallel_for(values.size(), jobs, [&](std::size_t i) {
            const PointPattern pat = sample_homogeneous_poisson(1.0, w, seeds_a[i]);
            values[i] = interference_at(pat, probe, params);
        });
        for (double s : {-1.0, 0.5}) {
            std::vector<std::vector<double>> samples;
            samples.reserve(values.size());
            for (double v : values) samples.push_back({v});
            const EstimateWithCI e = empirical_joint_laplace(samples, s);
            const double ref = poisson_laplace_closed_form(1.0, params.attenuation, s);
            rows.push_back({"laplace_transform", "poisson_lambda=1_s=" + fmt_double(s), e.value,
                            e.std_error, ref, std::fabs(e.value - ref) <= 3.0 * e.std_error});
        }
    }
    {  // joint Laplace ordering at two probes, s = -1
        const Window w = lattice_aligned_window(lat, 30, 17, BoundaryMode::free_boundary);
        SinrParams params;
        params.attenuation = ec.attenuation();
        const std::vector<Point> probes = {{15.0, 14.5}, {17.0, 14.5}};
        const int reps_lt = std::min(reps, 800);
        std::vector<std::vector<double>> sub(static_cast<std::size_t>(reps_lt)),
            poi(static_cast<std::size_t>(reps_lt));
        parallel_for(sub.size(), jobs, [&](std::size_t i) {
            const PointPattern a =
                sample_perturbed_lattice(lat, ReplicaLaw::binomial(1, 1.0), w, seeds_a[i]);
            const PointPattern b = sample_homogeneous_poisson(lam, w, seeds_b[i]);
            for (const Point& probe : probes) {
                sub[i].push_back(interference_at(a, probe, params));
                poi[i].push_back(interference_at(b, probe, params));
            }
        });
        const EstimateWithCI es = empirical_joint_laplace(sub, -1.0);
        const EstimateWithCI ep = empirical_joint_laplace(poi, -1.0);
        const double joint = std::sqrt(es.std_error * es.std_error + ep.std_error * ep.std_error);
        rows.push_back({"laplace_ordering", "bin11_vs_poisson_n=2_s=-1", es.value, es.std_error, ep.value,
                        es.value <= ep.value + 3.0 * joint});
    }
    {  // convex-order chain of the replica laws
        const CountDistribution poi = CountDistribution::poisson(1.0);
        bool all = true;
        for (std::uint32_t n = 1; n <= 10; ++n) {
            const CountDistribution bin = CountDistribution::binomial(n, 1.0 / n);
            all = all && check_convex_order(bin, poi, 64).ordered;
        }
        rows.push_back({"convex_order", "bin_n_vs_poisson_n=1..10", all ? 1.0 : 0.0, 0.0, 1.0, all});
        const ConvexOrderResult rev =
            check_convex_order(poi, CountDistribution::binomial(2, 0.5), 64);
        rows.push_back({"convex_order_reversed", "poisson_vs_bin2_expected_fail", rev.ordered ? 1.0 : 0.0,
                        0.0, 0.0, !rev.ordered && rev.witness_k == 1});
    }

    write_diagnostics_csv(rows, ec.out_dir / "tables" / "diagnostics.csv");
    bool all_pass = true;
    for (const DiagnosticRow& r : rows) all_pass = all_pass && r.pass;
    if (!all_pass) throw PreconditionError("diagnostics suite reported failing rows");
}

/// Analytic-bound table: c(lambda), the path-count base at c, the Peierls
/// void bound, and the cross-check against the empirical critical range.
inline void run_bounds_table(const ExperimentConfig& ec, RunManifest&) {
    const int d = static_cast<int>(ec.raw.get_int("bounds.d", 2));
    const std::vector<double> lambdas =
        ec.raw.get_real_list("bounds.lambdas", {1.0, 2.0 / std::sqrt(3.0), 2.0});
    const double reference_rho = ec.raw.get_real("bounds.reference_rho", 1.04);
    const double lattice_lambda = 2.0 / std::sqrt(3.0);

    std::ofstream out = open_output(ec.out_dir / "tables" / "bounds.csv");
    out << "lambda,c_lambda,path_bound_base_at_c,void_bound_r1_n10,reference_rho_hat,c_le_half_rho\n";
    for (double lam : lambdas) {
        const double c = lower_bound_radius(lam, d);
        // base of the path-count bound, i.e. the n-th root at n = 1
        const double base = expected_path_count_bound(lam, c, 1, d);
        const double vb = peierls_void_bound(lam, 1.0, 10, d);
        const bool has_ref = std::fabs(lam - lattice_lambda) < 1e-9;
        if (has_ref && !(c <= reference_rho / 2.0))
            throw PreconditionError("bounds table: c(lambda) exceeds half the reference critical range", c);
        out << fmt_double(lam) << ',' << fmt_double(c) << ',' << fmt_double(base) << ',' << fmt_double(vb)
            << ',' << (has_ref ? fmt_double(reference_rho) : std::string("")) << ','
            << (has_ref ? (c <= reference_rho / 2.0 ? "yes" : "no") : std::string("")) << '\n';
    }
    if (!out) throw IoError("write failed: bounds table");
}

/// Dispatch on the experiment name; returns after writing the manifest.
inline void run_experiment(const ExperimentConfig& ec) {
    RunManifest manifest{ec, {}, {}};
    manifest.clock.start(ec.experiment);
    if (ec.experiment == "fig1_patterns")
        run_fig1_patterns(ec, manifest);
    else if (ec.experiment == "fig2_gilbert_scan")
        run_fig2_scan(ec, manifest);
    else if (ec.experiment == "sinr_gamma_scan")
        run_sinr_gamma_scan(ec, manifest);
    else if (ec.experiment == "diagnostics_suite")
        run_diagnostics_suite(ec, manifest);
    else if (ec.experiment == "bounds_table")
        run_bounds_table(ec, manifest);
    else
        throw ConfigError("unknown experiment '" + ec.experiment + "'");
    manifest.clock.stop();
    manifest.write(ec.out_dir / "manifest.json");
}

}  // namespace subperc
