#pragma once

// Minimal deterministic line-chart writer: axes, ticks, one polyline per series.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace h2sim::svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    double y_min = 0.0, y_max = 1.0;
};

namespace detail {
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
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
}  // namespace detail

inline std::string render(const Chart& chart) {
    using detail::num;
    constexpr double W = 640, H = 420, left = 70, right = 150, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    double x_min = 0.0, x_max = 0.0;
    bool any = false;
    for (const auto& s : chart.series)
        for (double v : s.x) {
            x_min = any ? std::min(x_min, v) : v;
            x_max = any ? std::max(x_max, v) : v;
            any = true;
        }
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    const double y_span = chart.y_max > chart.y_min ? chart.y_max - chart.y_min : 1.0;
    auto sx = [&](double v) { return left + (v - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double v) { return top + ph - (v - chart.y_min) / y_span * ph; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + detail::escape(chart.title) + "</text>\n";
    o += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" + num(top + ph) + "\" stroke=\"black\"/>\n";
    o += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + ph) + "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x_min + (x_max - x_min) * k / 5.0, yv = chart.y_min + y_span * k / 5.0;
        o += "<line x1=\"" + num(sx(xv)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(sx(xv)) + "\" y2=\"" + num(top + ph + 5) + "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" + num(xv) + "</text>\n";
        o += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(sy(yv)) + "\" x2=\"" + num(left) + "\" y2=\"" + num(sy(yv)) + "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(yv) + 4) + "\" text-anchor=\"end\">" + num(yv) + "</text>\n";
    }
    o += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(H - 15) + "\" text-anchor=\"middle\">" + detail::escape(chart.x_label) + "</text>\n";
    o += "<text x=\"18\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + num(top + ph / 2) + ")\">" +
         detail::escape(chart.y_label) + "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        const std::string color = palette[i % (sizeof palette / sizeof *palette)];
        std::string pts;
        for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
            if (k) pts += ' ';
            pts += num(sx(s.x[k])) + "," + num(sy(s.y[k]));
        }
        o += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = top + 10 + 18.0 * static_cast<double>(i);
        o += "<line x1=\"" + num(left + pw + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(left + pw + 32) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + num(left + pw + 38) + "\" y=\"" + num(ly + 4) + "\">" + detail::escape(s.label) + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

}  // namespace h2sim::svg
