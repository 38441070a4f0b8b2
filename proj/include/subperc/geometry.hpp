#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "subperc/errors.hpp"

namespace subperc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool points_equal(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

enum class BoundaryMode { torus, free_boundary };

inline std::string to_string(BoundaryMode m) {
    return m == BoundaryMode::torus ? "torus" : "free";
}

/// Rectangular generation window. Torus mode identifies opposite edges;
/// free mode keeps the window as a plain rectangle.
struct Window {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    BoundaryMode mode = BoundaryMode::free_boundary;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }

    bool contains(const Point& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    /// Wrap a point into the fundamental domain [x_min, x_max) x [y_min, y_max).
    Point wrap(const Point& p) const {
        double u = std::fmod(p.x - x_min, width());
        double v = std::fmod(p.y - y_min, height());
        if (u < 0.0) u += width();
        if (v < 0.0) v += height();
        return {x_min + u, y_min + v};
    }

    void validate() const {
        if (!(x_min < x_max) || !(y_min < y_max))
            throw ParameterError("window: requires x_min < x_max and y_min < y_max");
    }

    static Window rect(double w, double h, BoundaryMode m = BoundaryMode::free_boundary) {
        Window win{0.0, w, 0.0, h, m};
        win.validate();
        return win;
    }
};

inline double wrapped_delta(double d, double period) {
    d = std::fabs(d);
    d = std::fmod(d, period);
    return std::min(d, period - d);
}

inline double torus_sq_distance(const Point& a, const Point& b, const Window& w) {
    const double dx = wrapped_delta(a.x - b.x, w.width());
    const double dy = wrapped_delta(a.y - b.y, w.height());
    return dx * dx + dy * dy;
}

inline double euclidean_sq_distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double torus_distance(const Point& a, const Point& b, const Window& w) {
    return std::sqrt(torus_sq_distance(a, b, w));
}

inline double euclidean_distance(const Point& a, const Point& b) {
    return std::sqrt(euclidean_sq_distance(a, b));
}

/// Regular hexagon with two vertical flat sides (pointy-top): the Voronoi
/// cell of a triangular-lattice site, whose flat sides face the six nearest
/// lattice neighbors. Circumradius is 2a/sqrt(3) for apothem a.
struct Hexagon {
    Point center;
    double apothem = 0.5;

    double circumradius() const { return 2.0 * apothem / std::sqrt(3.0); }
    double area() const { return 2.0 * std::sqrt(3.0) * apothem * apothem; }

    /// Closed containment test: |x| <= a and |x +- sqrt(3) y| <= 2a.
    bool contains(const Point& p) const {
        const double dx = p.x - center.x;
        const double dy = p.y - center.y;
        const double s3 = std::sqrt(3.0);
        return std::fabs(dx) <= apothem && std::fabs(dx + s3 * dy) <= 2.0 * apothem &&
               std::fabs(dx - s3 * dy) <= 2.0 * apothem;
    }
};

}  // namespace subperc
