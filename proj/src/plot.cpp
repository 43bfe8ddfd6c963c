#include "ccresm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <vector>

namespace ccresm {

namespace {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (snr_db, rate > 0)
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string render_plot_svg(const SweepResult& result, PlotKind kind) {
    if (result.cells.empty()) throw std::invalid_argument("plot: empty sweep result");

    std::map<std::pair<std::string, double>, Series> by_curve;
    for (const auto& c : result.cells) {
        const double v = kind == PlotKind::Ber ? c.ber : c.per;
        if (std::isnan(v))
            throw std::invalid_argument("plot: result has no values for the requested kind");
        auto& s = by_curve[{scheme_name(c.scheme), c.delta}];
        if (s.label.empty())
            s.label = std::string(scheme_name(c.scheme)) + " delta=" + fmt(c.delta);
        if (v > 0.0) s.points.emplace_back(c.snr_db, v);
    }
    std::vector<Series> series;
    for (auto& [key, s] : by_curve) {
        std::sort(s.points.begin(), s.points.end());
        series.push_back(std::move(s));
    }

    double xmin = 1e300, xmax = -1e300, ymin = 1.0;
    bool any = false;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            any = true;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
        }
    if (!any) throw std::invalid_argument("plot: no positive rates to draw");
    if (xmax - xmin < 1e-9) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    const double ylo = std::floor(std::log10(ymin));  // decades [ylo, 0]

    const double width = 780, height = 540;
    const double left = 70, right = 190, top = 40, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + (0.0 - std::log10(y)) / (0.0 - ylo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" +
           std::string(kind == PlotKind::Ber ? "BER" : "PER") + " vs SNR</text>\n";

    // decade gridlines and y labels
    for (int d = static_cast<int>(ylo); d <= 0; ++d) {
        const double y = sy(std::pow(10.0, d));
        svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left + pw) +
               "\" y2=\"" + fmt(y) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" +
               std::to_string(d) + "</text>\n";
    }
    // x ticks at integer dB steps
    const double step = (xmax - xmin) > 12.0 ? 2.0 : 1.0;
    for (double x = std::ceil(xmin); x <= xmax + 1e-9; x += step) {
        const double px = sx(x);
        svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(px) +
               "\" y2=\"" + fmt(top + ph) + "\" stroke=\"#eeeeee\"/>\n";
        svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(top + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(x) +
               "</text>\n";
    }
    svg += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) +
           "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(height - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">SNR (dB)"
           "</text>\n";

    int color_idx = 0;
    double legend_y = top + 12;
    for (const auto& s : series) {
        const char* color = kPalette[color_idx % 8];
        ++color_idx;
        if (!s.points.empty()) {
            std::string path;
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                path += (i == 0 ? "M" : "L");
                path += fmt(sx(s.points[i].first)) + " " + fmt(sy(s.points[i].second)) + " ";
            }
            svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\"/>\n";
            for (const auto& [x, y] : s.points)
                svg += "<circle cx=\"" + fmt(sx(x)) + "\" cy=\"" + fmt(sy(y)) +
                       "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        svg += "<rect x=\"" + fmt(left + pw + 12) + "\" y=\"" + fmt(legend_y - 8) +
               "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
        svg += "<text x=\"" + fmt(left + pw + 30) + "\" y=\"" + fmt(legend_y + 2) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
        legend_y += 18;
    }
    svg += "</svg>\n";
    return svg;
}

void emit_plot(const SweepResult& result, PlotKind kind, const std::string& out_path) {
    write_text_file(out_path, render_plot_svg(result, kind));
}

}  // namespace ccresm
