#ifndef MVSKEW_IO_SVG_HPP
#define MVSKEW_IO_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "mvskew/errors.hpp"

namespace mvskew::io {

/**
 * Fixed-size chart geometry: 800 x 500 canvas, linear axes. The data-to-
 * pixel mapping is public so artifact consumers can recompute polyline
 * coordinates from the trace and verify the plot against it.
 */
struct ChartGeometry {
    static constexpr double width = 800.0;
    static constexpr double height = 500.0;
    static constexpr double margin_left = 80.0;
    static constexpr double margin_right = 25.0;
    static constexpr double margin_top = 45.0;
    static constexpr double margin_bottom = 60.0;

    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;

    ChartGeometry(const std::vector<double>& xs, const std::vector<double>& ys) {
        if (xs.empty() || xs.size() != ys.size())
            throw DimensionError("ChartGeometry: need equally sized, nonempty series");
        x_min = x_max = xs[0];
        y_min = y_max = ys[0];
        for (std::size_t i = 1; i < xs.size(); ++i) {
            x_min = std::min(x_min, xs[i]);
            x_max = std::max(x_max, xs[i]);
            y_min = std::min(y_min, ys[i]);
            y_max = std::max(y_max, ys[i]);
        }
        // Degenerate spans get a unit pad so the mapping stays well defined.
        if (x_min == x_max) { x_min -= 0.5; x_max += 0.5; }
        if (y_min == y_max) { y_min -= 0.5; y_max += 0.5; }
    }

    double plot_width() const { return width - margin_left - margin_right; }
    double plot_height() const { return height - margin_top - margin_bottom; }

    double px(double x) const {
        return margin_left + (x - x_min) / (x_max - x_min) * plot_width();
    }
    double py(double y) const {
        return height - margin_bottom - (y - y_min) / (y_max - y_min) * plot_height();
    }
};

namespace detail {

inline std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// Polyline points string ("x1,y1 x2,y2 ...") for a series under a geometry.
inline std::string polyline_points(const ChartGeometry& geo,
                                   const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += " ";
        out += detail::fmt_px(geo.px(xs[i])) + "," + detail::fmt_px(geo.py(ys[i]));
    }
    return out;
}

/**
 * Render a single-series line chart as a standalone SVG document. Linear
 * axes with five ticks per axis, the series as one polyline, data points as
 * small circles.
 */
inline std::string render_line_chart(const std::vector<double>& xs,
                                     const std::vector<double>& ys,
                                     const std::string& title,
                                     const std::string& x_label,
                                     const std::string& y_label) {
    const ChartGeometry geo(xs, ys);
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << ChartGeometry::width
        << "\" height=\"" << ChartGeometry::height << "\" viewBox=\"0 0 "
        << ChartGeometry::width << " " << ChartGeometry::height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << ChartGeometry::width / 2
        << "\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << detail::xml_escape(title) << "</text>\n";

    const double x0 = geo.px(geo.x_min), x1 = geo.px(geo.x_max);
    const double y0 = geo.py(geo.y_min), y1 = geo.py(geo.y_max);
    svg << "<line x1=\"" << detail::fmt_px(x0) << "\" y1=\"" << detail::fmt_px(y0)
        << "\" x2=\"" << detail::fmt_px(x1) << "\" y2=\"" << detail::fmt_px(y0)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << detail::fmt_px(x0) << "\" y1=\"" << detail::fmt_px(y0)
        << "\" x2=\"" << detail::fmt_px(x0) << "\" y2=\"" << detail::fmt_px(y1)
        << "\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i < kTicks; ++i) {
        const double frac = static_cast<double>(i) / (kTicks - 1);
        const double xv = geo.x_min + frac * (geo.x_max - geo.x_min);
        const double yv = geo.y_min + frac * (geo.y_max - geo.y_min);
        const double xp = geo.px(xv), yp = geo.py(yv);
        svg << "<line x1=\"" << detail::fmt_px(xp) << "\" y1=\"" << detail::fmt_px(y0)
            << "\" x2=\"" << detail::fmt_px(xp) << "\" y2=\"" << detail::fmt_px(y0 + 6)
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::fmt_px(xp) << "\" y=\"" << detail::fmt_px(y0 + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::fmt_tick(xv) << "</text>\n";
        svg << "<line x1=\"" << detail::fmt_px(x0 - 6) << "\" y1=\"" << detail::fmt_px(yp)
            << "\" x2=\"" << detail::fmt_px(x0) << "\" y2=\"" << detail::fmt_px(yp)
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::fmt_px(x0 - 9) << "\" y=\"" << detail::fmt_px(yp + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::fmt_tick(yv) << "</text>\n";
    }

    svg << "<text x=\"" << detail::fmt_px((x0 + x1) / 2) << "\" y=\""
        << detail::fmt_px(ChartGeometry::height - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << detail::xml_escape(x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << detail::fmt_px((y0 + y1) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << detail::fmt_px((y0 + y1) / 2) << ")\">" << detail::xml_escape(y_label)
        << "</text>\n";

    svg << "<polyline fill=\"none\" stroke=\"#1f6fb5\" stroke-width=\"1.5\" points=\""
        << polyline_points(geo, xs, ys) << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        svg << "<circle cx=\"" << detail::fmt_px(geo.px(xs[i])) << "\" cy=\""
            << detail::fmt_px(geo.py(ys[i])) << "\" r=\"2\" fill=\"#1f6fb5\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace mvskew::io

#endif // MVSKEW_IO_SVG_HPP
