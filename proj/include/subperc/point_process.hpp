#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "subperc/errors.hpp"
#include "subperc/geometry.hpp"
#include "subperc/rng.hpp"

namespace subperc {

/// Distribution of the per-site replica count N. All stock variants used in
/// the simulations have mean exactly one:
///   binomial(n, 1/n)       — convexly below Poisson(1), increasing in n
///   poisson(1)             — reproduces the homogeneous Poisson process
///   cox_bernoulli(a)       — L = a w.p. 1/a else 0, then N ~ Poisson(L)
///   scaled_poisson(n)      — N = n N', N' ~ Poisson(1/n), convexly above Poisson(1)
struct ReplicaLaw {
    enum class Kind { binomial, poisson, cox_bernoulli, scaled_poisson };

    Kind kind = Kind::binomial;
    std::uint32_t n = 1;   // binomial trials / scale factor
    double p = 1.0;        // binomial success probability
    double mean_param = 1.0;  // poisson mean
    double a = 1.0;        // cox amplitude

    static ReplicaLaw binomial(std::uint32_t n, double p) {
        if (n == 0 || p < 0.0 || p > 1.0) throw ParameterError("replica law: bad binomial parameters");
        ReplicaLaw law;
        law.kind = Kind::binomial;
        law.n = n;
        law.p = p;
        return law;
    }

    static ReplicaLaw poisson(double mean) {
        if (mean < 0.0) throw ParameterError("replica law: negative poisson mean");
        ReplicaLaw law;
        law.kind = Kind::poisson;
        law.mean_param = mean;
        return law;
    }

    static ReplicaLaw cox_bernoulli(double a) {
        if (a < 1.0) throw ParameterError("replica law: cox amplitude must be >= 1");
        ReplicaLaw law;
        law.kind = Kind::cox_bernoulli;
        law.a = a;
        return law;
    }

    static ReplicaLaw scaled_poisson(std::uint32_t n) {
        if (n == 0) throw ParameterError("replica law: scale must be positive");
        ReplicaLaw law;
        law.kind = Kind::scaled_poisson;
        law.n = n;
        return law;
    }

    double mean() const {
        switch (kind) {
            case Kind::binomial: return static_cast<double>(n) * p;
            case Kind::poisson: return mean_param;
            case Kind::cox_bernoulli: return 1.0;        // (1/a) * a
            case Kind::scaled_poisson: return 1.0;       // n * (1/n)
        }
        return 0.0;
    }

    std::string name() const {
        switch (kind) {
            case Kind::binomial:
                return "Bin(" + std::to_string(n) + ",1/" + std::to_string(n) + ")";
            case Kind::poisson: {
                std::string m = std::to_string(mean_param);
                m.erase(m.find_last_not_of('0') + 1);
                if (!m.empty() && m.back() == '.') m.pop_back();
                return "Poi(" + m + ")";
            }
            case Kind::cox_bernoulli: {
                std::string s = std::to_string(a);
                s.erase(s.find_last_not_of('0') + 1);
                if (!s.empty() && s.back() == '.') s.pop_back();
                return "Cox(" + s + ")";
            }
            case Kind::scaled_poisson:
                return "ScaledPoi(" + std::to_string(n) + ")";
        }
        return "?";
    }
};

/// One replica-count draw.
inline std::uint32_t sample_replica_count(const ReplicaLaw& law, Rng& rng) {
    switch (law.kind) {
        case ReplicaLaw::Kind::binomial:
            return rng.binomial(law.n, law.p);
        case ReplicaLaw::Kind::poisson:
            return static_cast<std::uint32_t>(rng.poisson(law.mean_param));
        case ReplicaLaw::Kind::cox_bernoulli: {
            const double L = rng.bernoulli(1.0 / law.a) ? law.a : 0.0;
            return static_cast<std::uint32_t>(rng.poisson(L));
        }
        case ReplicaLaw::Kind::scaled_poisson:
            return law.n * static_cast<std::uint32_t>(rng.poisson(1.0 / law.n));
    }
    return 0;
}

/// Triangular lattice (hexagonal Voronoi cells): nearest-neighbor distance
/// equals `spacing`, rows are spacing*sqrt(3)/2 apart with alternate rows
/// shifted by spacing/2. Intensity is 2/(sqrt(3) spacing^2).
struct Lattice {
    double spacing = 1.0;
    Point origin{0.0, 0.0};

    double intensity() const { return 2.0 / (std::sqrt(3.0) * spacing * spacing); }
    double row_height() const { return spacing * std::sqrt(3.0) / 2.0; }
    double apothem() const { return spacing / 2.0; }
    double circumradius() const { return spacing / std::sqrt(3.0); }

    Point site(std::int64_t i, std::int64_t j) const {
        const double shift = (j % 2 != 0) ? spacing / 2.0 : 0.0;
        return {origin.x + static_cast<double>(i) * spacing + shift,
                origin.y + static_cast<double>(j) * row_height()};
    }

    void validate() const {
        if (!(spacing > 0.0)) throw ParameterError("lattice: spacing must be positive");
    }
};

struct Provenance {
    std::string descriptor;
    std::uint64_t seed = 0;
};

/// A finite planar point pattern together with its generation window and
/// generator provenance.
struct PointPattern {
    std::vector<Point> points;
    Window window;
    Provenance provenance;

    std::size_t size() const { return points.size(); }
    double empirical_intensity() const { return static_cast<double>(points.size()) / window.area(); }
};

/// Homogeneous Poisson pattern: Poisson(intensity * area) count, then i.i.d.
/// uniform positions.
inline PointPattern sample_homogeneous_poisson(double intensity, const Window& window,
                                               std::uint64_t seed) {
    if (intensity < 0.0) throw ParameterError("poisson sampler: negative intensity");
    window.validate();
    PointPattern pat;
    pat.window = window;
    pat.provenance = {"poisson(intensity=" + std::to_string(intensity) + ")", seed};
    Rng rng(seed);
    const std::uint64_t count = rng.poisson(intensity * window.area());
    pat.points.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        const double x = rng.uniform(window.x_min, window.x_max);
        const double y = rng.uniform(window.y_min, window.y_max);
        pat.points.push_back({x, y});
    }
    return pat;
}

namespace detail {

/// Enumerate integer site indices (i, j) whose site lies in the half-open
/// window [x_min, x_max) x [y_min, y_max) expanded by `margin` on all sides.
/// The half-open convention makes aligned windows hold an exact number of
/// sites (no double-counted boundary rows).
template <typename Fn>
void for_each_lattice_site(const Lattice& lat, const Window& w, double margin, Fn&& fn) {
    const double rh = lat.row_height();
    const auto j_lo = static_cast<std::int64_t>(std::floor((w.y_min - margin - lat.origin.y) / rh)) - 1;
    const auto j_hi = static_cast<std::int64_t>(std::ceil((w.y_max + margin - lat.origin.y) / rh)) + 1;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        const double y = lat.origin.y + static_cast<double>(j) * rh;
        if (y < w.y_min - margin || y >= w.y_max + margin) continue;
        const double shift = (j % 2 != 0) ? lat.spacing / 2.0 : 0.0;
        const double ox = lat.origin.x + shift;
        const auto i_lo = static_cast<std::int64_t>(std::floor((w.x_min - margin - ox) / lat.spacing)) - 1;
        const auto i_hi = static_cast<std::int64_t>(std::ceil((w.x_max + margin - ox) / lat.spacing)) + 1;
        for (std::int64_t i = i_lo; i <= i_hi; ++i) {
            const double x = ox + static_cast<double>(i) * lat.spacing;
            if (x < w.x_min - margin || x >= w.x_max + margin) continue;
            fn(i, j, Point{x, y});
        }
    }
}

}  // namespace detail

/// All lattice sites inside the window (half-open on the upper edges).
inline PointPattern triangular_lattice_pattern(const Lattice& lat, const Window& window) {
    lat.validate();
    window.validate();
    PointPattern pat;
    pat.window = window;
    pat.provenance = {"lattice(spacing=" + std::to_string(lat.spacing) + ")", 0};
    detail::for_each_lattice_site(lat, window, 0.0,
                                  [&](std::int64_t, std::int64_t, Point p) { pat.points.push_back(p); });
    return pat;
}

/// Torus-aligned window for a triangular lattice: nx columns and ny_pairs
/// row pairs, so that wrapped hexagons tile the torus exactly.
inline Window lattice_aligned_window(const Lattice& lat, int nx, int ny_pairs,
                                     BoundaryMode mode = BoundaryMode::torus) {
    if (nx <= 0 || ny_pairs <= 0) throw ParameterError("aligned window: sizes must be positive");
    return Window{lat.origin.x, lat.origin.x + nx * lat.spacing,
                  lat.origin.y, lat.origin.y + ny_pairs * std::sqrt(3.0) * lat.spacing, mode};
}

/// Uniform point in the regular hexagon (flat sides facing lattice
/// neighbors) by rejection from its bounding box; acceptance 3/4 exactly.
inline Point sample_uniform_in_hexagon(Point center, double apothem, Rng& rng,
                                       std::uint64_t* attempts = nullptr) {
    if (!(apothem > 0.0)) throw ParameterError("hexagon sampler: apothem must be positive");
    const Hexagon hex{center, apothem};
    const double rc = hex.circumradius();
    for (;;) {
        if (attempts) ++(*attempts);
        Point p{center.x + rng.uniform(-apothem, apothem), center.y + rng.uniform(-rc, rc)};
        if (hex.contains(p)) return p;
    }
}

/// Perturbed lattice: each site z_i with its hexagon meeting the window draws
/// N_i ~ law from a per-site substream and places N_i points uniformly in the
/// hexagon of z_i. Torus mode wraps displaced points; free mode keeps only
/// in-window points. Per-site substreams (seed, site index) make the result
/// independent of site iteration order.
inline PointPattern sample_perturbed_lattice(const Lattice& lat, const ReplicaLaw& law,
                                             const Window& window, std::uint64_t seed) {
    lat.validate();
    window.validate();
    PointPattern pat;
    pat.window = window;
    pat.provenance = {"perturbed_lattice(" + law.name() + ",spacing=" + std::to_string(lat.spacing) + ")",
                      seed};

    const bool torus = window.mode == BoundaryMode::torus;
    // Torus: sites of the fundamental domain only (their wrapped hexagons
    // tile the torus when the window is lattice-aligned). Free: include every
    // site whose hexagon can reach into the window, then clip.
    const double margin = torus ? 0.0 : lat.circumradius();
    bool any_site = false;
    detail::for_each_lattice_site(lat, window, margin, [&](std::int64_t i, std::int64_t j, Point site) {
        any_site = true;
        Rng site_rng(derive_seed(seed, zigzag(i), zigzag(j)));
        const std::uint32_t replicas = sample_replica_count(law, site_rng);
        for (std::uint32_t k = 0; k < replicas; ++k) {
            Point p = sample_uniform_in_hexagon(site, lat.apothem(), site_rng);
            if (torus) {
                pat.points.push_back(window.wrap(p));
            } else if (window.contains(p)) {
                pat.points.push_back(p);
            }
        }
    });
    if (!any_site)
        throw ParameterError("perturbed lattice: window contains no lattice site");
    return pat;
}

/// Index of the lattice site whose Voronoi hexagon holds p (nearest site).
inline std::pair<std::int64_t, std::int64_t> nearest_lattice_site(const Lattice& lat, const Point& p) {
    const double rh = lat.row_height();
    const auto j0 = static_cast<std::int64_t>(std::floor((p.y - lat.origin.y) / rh));
    std::pair<std::int64_t, std::int64_t> best{0, 0};
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int64_t j = j0 - 1; j <= j0 + 2; ++j) {
        const double shift = (j % 2 != 0) ? lat.spacing / 2.0 : 0.0;
        const double ox = lat.origin.x + shift;
        const auto i0 = static_cast<std::int64_t>(std::floor((p.x - ox) / lat.spacing));
        for (std::int64_t i = i0 - 1; i <= i0 + 2; ++i) {
            const Point s = lat.site(i, j);
            const double d = euclidean_sq_distance(p, s);
            if (d < best_d) {
                best_d = d;
                best = {i, j};
            }
        }
    }
    return best;
}

}  // namespace subperc
