#pragma once

// Minimal deterministic SVG charts: scatter/line series with optional
// reference lines, linear or log-log axes.

#include "annulus_lab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace annulus_lab {

struct PlotSeries
{
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool connect = true;
};

/// y = exp(intercept)·x^slope on log axes, y = intercept + slope·x otherwise.
struct ReferenceLine
{
    std::string label;
    double slope = 0.0;
    double intercept = 0.0;
};

struct PlotSpec
{
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    bool log_log = false;
    std::vector<PlotSeries> series;
    std::vector<ReferenceLine> references;
    int width = 640;
    int height = 480;

    void validate() const
    {
        if (width < 100 || height < 100)
            throw ArgumentError("plot: canvas too small");
        for (const auto& s : series)
            for (const auto& [x, y] : s.points) {
                if (!std::isfinite(x) || !std::isfinite(y))
                    throw ArgumentError("plot: non-finite value in series '" + s.label + "'");
                if (log_log && (x <= 0.0 || y <= 0.0))
                    throw ArgumentError("plot: log axes need positive values in series '" + s.label + "'");
            }
    }
};

namespace detail {

inline std::string svg_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string svg_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline const char* palette(std::size_t i)
{
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return colors[i % 6];
}

} // namespace detail

inline std::string render_svg(const PlotSpec& plot)
{
    plot.validate();
    const double left = 70, right = 20, top = 40, bottom = 50;
    const double W = plot.width, H = plot.height;
    const double pw = W - left - right, ph = H - top - bottom;

    auto tx = [&](double v) { return plot.log_log ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : plot.series)
        for (const auto& [x, y] : s.points) {
            x0 = std::min(x0, tx(x));
            x1 = std::max(x1, tx(x));
            y0 = std::min(y0, tx(y));
            y1 = std::max(y1, tx(y));
        }
    if (!std::isfinite(x0)) {
        x0 = 0;
        x1 = 1;
        y0 = 0;
        y1 = 1;
    }
    if (x1 - x0 < 1e-12) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx;
    x1 += padx;
    y0 -= pady;
    y1 += pady;
    auto sx = [&](double u) { return left + (u - x0) / (x1 - x0) * pw; };
    auto sy = [&](double v) { return top + ph - (v - y0) / (y1 - y0) * ph; };
    using detail::svg_num;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
       << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << svg_num(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << detail::svg_escape(plot.title) << "</text>\n";
    // axes
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(top + ph) << "\" x2=\"" << svg_num(left + pw) << "\" y2=\""
       << svg_num(top + ph) << "\"/>\n";
    os << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(top) << "\" x2=\"" << svg_num(left) << "\" y2=\""
       << svg_num(top + ph) << "\"/>\n";
    os << "</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double u = x0 + (x1 - x0) * i / 4.0;
        const double v = y0 + (y1 - y0) * i / 4.0;
        const double xu = plot.log_log ? std::pow(10.0, u) : u;
        const double yv = plot.log_log ? std::pow(10.0, v) : v;
        char lx[32], ly[32];
        std::snprintf(lx, sizeof lx, "%.3g", xu);
        std::snprintf(ly, sizeof ly, "%.3g", yv);
        os << "<text x=\"" << svg_num(sx(u)) << "\" y=\"" << svg_num(top + ph + 16) << "\" text-anchor=\"middle\">" << lx
           << "</text>\n";
        os << "<text x=\"" << svg_num(left - 6) << "\" y=\"" << svg_num(sy(v) + 4) << "\" text-anchor=\"end\">" << ly
           << "</text>\n";
    }
    os << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"" << svg_num(H - 10) << "\" text-anchor=\"middle\">"
       << detail::svg_escape(plot.x_label) << (plot.log_log ? " (log)" : "") << "</text>\n";
    os << "<text x=\"16\" y=\"" << svg_num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << svg_num(top + ph / 2) << ")\">" << detail::svg_escape(plot.y_label) << (plot.log_log ? " (log)" : "")
       << "</text>\n";
    os << "</g>\n";

    std::size_t legend = 0;
    auto legend_entry = [&](const std::string& label, const char* color, bool dashed) {
        const double y = top + 12 + 16.0 * static_cast<double>(legend++);
        os << "<line x1=\"" << svg_num(left + 10) << "\" y1=\"" << svg_num(y) << "\" x2=\"" << svg_num(left + 30) << "\" y2=\""
           << svg_num(y) << "\" stroke=\"" << color << "\"" << (dashed ? " stroke-dasharray=\"4 3\"" : "") << "/>\n";
        os << "<text x=\"" << svg_num(left + 36) << "\" y=\"" << svg_num(y + 4)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::svg_escape(label) << "</text>\n";
    };

    for (std::size_t r = 0; r < plot.references.size(); ++r) {
        const auto& ref = plot.references[r];
        // On log axes u, v are log10 values and the line is ln y = intercept + slope·ln x.
        auto f = [&](double u) {
            if (plot.log_log)
                return (ref.intercept + ref.slope * u * std::log(10.0)) / std::log(10.0);
            return ref.intercept + ref.slope * u;
        };
        const char* color = "#7f7f7f";
        os << "<line x1=\"" << svg_num(sx(x0)) << "\" y1=\"" << svg_num(sy(f(x0))) << "\" x2=\"" << svg_num(sx(x1))
           << "\" y2=\"" << svg_num(sy(f(x1))) << "\" stroke=\"" << color << "\" stroke-dasharray=\"4 3\"/>\n";
        legend_entry(ref.label, color, true);
    }

    os << "<defs><clipPath id=\"plot\"><rect x=\"" << svg_num(left) << "\" y=\"" << svg_num(top) << "\" width=\"" << svg_num(pw)
       << "\" height=\"" << svg_num(ph) << "\"/></clipPath></defs>\n";
    for (std::size_t i = 0; i < plot.series.size(); ++i) {
        const auto& s = plot.series[i];
        const char* color = detail::palette(i);
        if (s.connect && s.points.size() >= 2) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" clip-path=\"url(#plot)\" points=\"";
            for (std::size_t k = 0; k < s.points.size(); ++k)
                os << (k ? " " : "") << svg_num(sx(tx(s.points[k].first))) << ',' << svg_num(sy(tx(s.points[k].second)));
            os << "\"/>\n";
        }
        for (const auto& [x, y] : s.points)
            os << "<circle cx=\"" << svg_num(sx(tx(x))) << "\" cy=\"" << svg_num(sy(tx(y))) << "\" r=\"3\" fill=\"" << color
               << "\"/>\n";
        legend_entry(s.label, color, false);
    }
    os << "</svg>\n";
    return os.str();
}

inline void emit_svg(const PlotSpec& plot, const std::string& path)
{
    const std::string text = render_svg(plot);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

} // namespace annulus_lab
