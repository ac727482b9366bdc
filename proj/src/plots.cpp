#include "segscore/plots.hpp"

#include "segscore/mask.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace segscore {

namespace {

std::string escape_xml(const std::string& s) {
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

std::string header(const PlotLabels& labels) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        kPlotWidth, kPlotHeight, kPlotWidth, kPlotHeight);
    out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kPlotWidth, kPlotHeight);
    out += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                       kPlotWidth / 2, escape_xml(labels.title));
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                       (kPlotLeft + kPlotRight) / 2, kPlotHeight - 8, escape_xml(labels.x_label));
    out += fmt::format(
        "<text x=\"14\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 14 {})\">{}</text>\n",
        (kPlotTop + kPlotBottom) / 2, (kPlotTop + kPlotBottom) / 2, escape_xml(labels.y_label));
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kPlotLeft, kPlotBottom,
                       kPlotRight);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kPlotLeft, kPlotTop,
                       kPlotBottom);
    return out;
}

std::string tick(double x, double y, const std::string& text, const char* anchor) {
    return fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"{}\">{}</text>\n",
                       x, y, anchor, escape_xml(text));
}

}  // namespace

std::string render_histogram_svg(const Histogram& histogram, const PlotLabels& labels) {
    if (histogram.bins.empty()) throw Error("EMPTY_PLOT", "histogram has no bins");
    std::size_t max_count = 0;
    for (const auto& b : histogram.bins) max_count = std::max(max_count, b.count);

    const double plot_h = kPlotBottom - kPlotTop;
    const double bar_w = (kPlotRight - kPlotLeft) / static_cast<double>(histogram.bins.size());
    std::string out = header(labels);
    out += tick(kPlotLeft - 4, kPlotBottom + 4, "0", "end");
    out += tick(kPlotLeft - 4, kPlotTop + 4, std::to_string(max_count), "end");
    for (std::size_t i = 0; i < histogram.bins.size(); ++i) {
        const auto& b = histogram.bins[i];
        const double h = max_count == 0 ? 0.0 : plot_h * static_cast<double>(b.count) / static_cast<double>(max_count);
        const double x = kPlotLeft + bar_w * static_cast<double>(i);
        out += fmt::format(
            "<rect class=\"bar\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#4682b4\" stroke=\"white\" "
            "data-count=\"{}\"/>\n",
            x, kPlotBottom - h, bar_w, h, b.count);
        out += tick(x, kPlotBottom + 14, fmt::format("{:.3g}", b.lo), "middle");
    }
    out += tick(kPlotRight, kPlotBottom + 14, fmt::format("{:.3g}", histogram.bins.back().hi), "middle");
    out += "</svg>\n";
    return out;
}

std::string render_boxplot_svg(const std::vector<std::pair<std::string, Distribution>>& series,
                               const PlotLabels& labels) {
    if (series.empty()) throw Error("EMPTY_PLOT", "box plot needs at least one distribution");
    double lo = series.front().second.min;
    double hi = series.front().second.max;
    for (const auto& [name, d] : series) {
        lo = std::min(lo, d.min);
        hi = std::max(hi, d.max);
    }
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double plot_h = kPlotBottom - kPlotTop;
    auto y_of = [&](double v) { return kPlotBottom - plot_h * (v - lo) / (hi - lo); };
    const double slot = (kPlotRight - kPlotLeft) / static_cast<double>(series.size());
    const double box_w = slot * 0.5;

    std::string out = header(labels);
    out += tick(kPlotLeft - 4, kPlotBottom + 4, fmt::format("{:.3g}", lo), "end");
    out += tick(kPlotLeft - 4, kPlotTop + 4, fmt::format("{:.3g}", hi), "end");
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& [name, d] = series[i];
        const double cx = kPlotLeft + slot * (static_cast<double>(i) + 0.5);
        const double x0 = cx - box_w / 2;
        out += fmt::format("<g class=\"box\" data-n=\"{}\">\n", d.n);
        out += fmt::format("<line class=\"whisker\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", cx,
                           y_of(d.max), y_of(d.q3));
        out += fmt::format("<line class=\"whisker\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", cx,
                           y_of(d.q1), y_of(d.min));
        out += fmt::format(
            "<rect class=\"iqr\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#b0c4de\" stroke=\"black\"/>\n", x0,
            y_of(d.q3), box_w, y_of(d.q1) - y_of(d.q3));
        out += fmt::format("<line class=\"median\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                           x0, y_of(d.median), x0 + box_w, y_of(d.median));
        out += fmt::format("<circle class=\"mean\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"black\"/>\n", cx, y_of(d.mean));
        out += "</g>\n";
        out += tick(cx, kPlotBottom + 14, name, "middle");
    }
    out += "</svg>\n";
    return out;
}

}  // namespace segscore
