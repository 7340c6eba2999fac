#include "regimecast/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace regimecast {

namespace {

constexpr int kWidth = 900;
constexpr int kHeight = 420;
constexpr int kMargin = 50;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
               const std::string& title) {
    if (series.empty()) throw std::invalid_argument("emit_plot: no series");
    std::size_t max_len = 0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series) {
        if (s.values.empty()) throw std::invalid_argument("emit_plot: zero-length series");
        max_len = std::max(max_len, s.values.size());
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi == lo) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << fmt(plot_w)
        << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << kMargin - 6 << "\" y=\"" << kMargin + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(hi)
        << "</text>\n";
    out << "<text x=\"" << kMargin - 6 << "\" y=\"" << kHeight - kMargin + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(lo)
        << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t n = s.values.size();
        for (std::size_t i = 0; i < n; ++i) {
            double x = kMargin + (n == 1 ? plot_w / 2
                                         : plot_w * static_cast<double>(i) /
                                               static_cast<double>(n - 1));
            double y = kMargin + plot_h * (1.0 - (s.values[i] - lo) / (hi - lo));
            if (i) out << ' ';
            out << fmt(x) << ',' << fmt(y);
        }
        out << "\"/>\n";
        // legend entry
        double ly = kMargin + 16.0 * static_cast<double>(si) + 12.0;
        out << "<line x1=\"" << kWidth - kMargin - 120 << "\" y1=\"" << fmt(ly) << "\" x2=\""
            << kWidth - kMargin - 100 << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kWidth - kMargin - 94 << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

void emit_bars(const std::vector<std::pair<std::string, double>>& bars, const std::string& path,
               const std::string& title) {
    if (bars.empty()) throw std::invalid_argument("emit_bars: no bars");
    double lo = 0.0, hi = 0.0;
    for (const auto& [label, v] : bars) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) hi = lo + 1.0;
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;
    const double zero_y = kMargin + plot_h * (1.0 - (0.0 - lo) / (hi - lo));
    const double bar_w = plot_w / static_cast<double>(bars.size());

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        double v = bars[i].second;
        double y = kMargin + plot_h * (1.0 - (std::max(v, 0.0) - lo) / (hi - lo));
        double h = std::abs(v) / (hi - lo) * plot_h;
        double x = kMargin + bar_w * static_cast<double>(i) + bar_w * 0.1;
        out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(bar_w * 0.8)
            << "\" height=\"" << fmt(h) << "\" fill=\"" << (v >= 0 ? "#1f77b4" : "#d62728")
            << "\"/>\n";
        out << "<text x=\"" << fmt(x + bar_w * 0.4) << "\" y=\"" << kHeight - kMargin + 14
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">"
            << bars[i].first << "</text>\n";
    }
    out << "<line x1=\"" << kMargin << "\" y1=\"" << fmt(zero_y) << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << fmt(zero_y) << "\" stroke=\"#444\"/>\n";
    out << "</svg>\n";
}

}  // namespace regimecast
