#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "subperc/errors.hpp"
#include "subperc/geometry.hpp"
#include "subperc/io.hpp"

namespace subperc {

/// Minimal hand-emitted SVG canvas: world coordinates map linearly onto the
/// image with the y-axis flipped. Styling goes through element classes.
class SvgCanvas {
public:
    SvgCanvas(const Window& world, double pixels_per_unit) : world_(world), scale_(pixels_per_unit) {
        width_px_ = world.width() * scale_;
        height_px_ = world.height() * scale_;
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_double(width_px_)
              << "\" height=\"" << fmt_double(height_px_) << "\" viewBox=\"0 0 "
              << fmt_double(width_px_) << ' ' << fmt_double(height_px_) << "\">\n";
        body_ << "<style>\n"
              << ".pt { fill: #444444; }\n"
              << ".pt-largest { fill: #d62728; }\n"
              << ".edge { stroke: #9ecae1; stroke-width: 0.8; }\n"
              << ".edge-largest { stroke: #d62728; stroke-width: 1.0; }\n"
              << ".bar { fill: #1f77b4; }\n"
              << ".frame { fill: none; stroke: #000000; stroke-width: 1.0; }\n"
              << "</style>\n";
        body_ << "<rect class=\"frame\" x=\"0\" y=\"0\" width=\"" << fmt_double(width_px_)
              << "\" height=\"" << fmt_double(height_px_) << "\"/>\n";
    }

    void circle(const Point& p, double radius_px, const std::string& cls) {
        body_ << "<circle class=\"" << cls << "\" cx=\"" << fmt_double(sx(p.x)) << "\" cy=\""
              << fmt_double(sy(p.y)) << "\" r=\"" << fmt_double(radius_px) << "\"/>\n";
    }

    void line(const Point& a, const Point& b, const std::string& cls) {
        body_ << "<line class=\"" << cls << "\" x1=\"" << fmt_double(sx(a.x)) << "\" y1=\""
              << fmt_double(sy(a.y)) << "\" x2=\"" << fmt_double(sx(b.x)) << "\" y2=\""
              << fmt_double(sy(b.y)) << "\"/>\n";
    }

    /// Axis-aligned bar in pixel coordinates (for the component inset).
    void bar_px(double x, double y, double w, double h, const std::string& cls) {
        body_ << "<rect class=\"" << cls << "\" x=\"" << fmt_double(x) << "\" y=\"" << fmt_double(y)
              << "\" width=\"" << fmt_double(w) << "\" height=\"" << fmt_double(h) << "\"/>\n";
    }

    void text_px(double x, double y, const std::string& s, double font_px) {
        body_ << "<text x=\"" << fmt_double(x) << "\" y=\"" << fmt_double(y) << "\" font-size=\""
              << fmt_double(font_px) << "\" font-family=\"sans-serif\">" << s << "</text>\n";
    }

    double width_px() const { return width_px_; }
    double height_px() const { return height_px_; }

    void save(const std::filesystem::path& path) {
        std::ofstream out = open_output(path);
        out << body_.str() << "</svg>\n";
        if (!out) throw IoError("write failed: " + path.string());
    }

private:
    double sx(double x) const { return (x - world_.x_min) * scale_; }
    double sy(double y) const { return (world_.y_max - y) * scale_; }

    Window world_;
    double scale_;
    double width_px_;
    double height_px_;
    std::ostringstream body_;
};

}  // namespace subperc
