#pragma once
// Static SVG renderings (line plots and heat maps) with fixed styling and no timestamps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace qtr::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline constexpr double kWidth = 720, kHeight = 440;
inline constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            default: o += c;
        }
    }
    return o;
}

inline const char* color(std::size_t i) {
    static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % 10];
}

inline std::string frame(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                         double x0, double x1, double y0, double y1) {
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
                    "\" height=\"" + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kLeft) + "\" y=\"24\" font-size=\"14\">" + escape(title) + "</text>\n";
    s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(kLeft) + "\" y=\"" + num(kTop + ph + 16) + "\">" + num(x0) + "</text>\n";
    s += "<text x=\"" + num(kLeft + pw) + "\" y=\"" + num(kTop + ph + 16) +
         "\" text-anchor=\"end\">" + num(x1) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + ph) + "\" text-anchor=\"end\">" + num(y0) +
         "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + 10) + "\" text-anchor=\"end\">" + num(y1) +
         "</text>\n";
    s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 20) + "\" text-anchor=\"middle\">" +
         escape(xlabel) + "</text>\n";
    s += "<text x=\"20\" y=\"" + num(kTop + ph / 2) + "\" transform=\"rotate(-90 20 " + num(kTop + ph / 2) +
         ")\" text-anchor=\"middle\">" + escape(ylabel) + "</text>\n";
    return s;
}

}  // namespace detail

inline std::string line_plot(const std::vector<Series>& series, const std::string& title,
                             const std::string& xlabel, const std::string& ylabel) {
    using namespace detail;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    std::string out = frame(title, xlabel, ylabel, x0, x1, y0, y1);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        out += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(color(i)) + "\" points=\"";
        for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
            const double px = kLeft + (s.x[k] - x0) / (x1 - x0) * pw;
            const double py = kTop + ph - (s.y[k] - y0) / (y1 - y0) * ph;
            out += num(px) + "," + num(py) + " ";
        }
        out += "\"/>\n";
        out += "<text x=\"" + num(kWidth - kRight + 10) + "\" y=\"" + num(kTop + 14 + 16 * static_cast<double>(i)) +
               "\" fill=\"" + color(i) + "\">" + escape(s.name) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

/// values[row][col]: rows along x (e.g. time), columns along y (e.g. site). Colour scales 0..max.
inline std::string heat_map(const std::vector<std::vector<double>>& values, double x0, double x1,
                            const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    using namespace detail;
    const std::size_t rows = values.size();
    const std::size_t cols = rows ? values.front().size() : 0;
    double vmax = 0;
    for (const auto& r : values)
        for (double v : r) vmax = std::max(vmax, v);
    if (!(vmax > 0)) vmax = 1;
    if (!(x1 > x0)) x1 = x0 + 1;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    std::string out = frame(title, xlabel, ylabel, x0, x1, 1, static_cast<double>(cols));
    const double cw = rows ? pw / static_cast<double>(rows) : pw;
    const double chh = cols ? ph / static_cast<double>(cols) : ph;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double f = std::clamp(values[r][c] / vmax, 0.0, 1.0);
            const int red = static_cast<int>(std::lround(255 * f));
            const int blue = static_cast<int>(std::lround(255 * (1 - f)));
            char fill[16];
            std::snprintf(fill, sizeof fill, "#%02x%02x%02x", red, 40, blue);
            out += "<rect x=\"" + num(kLeft + cw * static_cast<double>(r)) + "\" y=\"" +
                   num(kTop + chh * static_cast<double>(cols - 1 - c)) + "\" width=\"" + num(cw + 0.5) +
                   "\" height=\"" + num(chh + 0.5) + "\" fill=\"" + fill + "\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace qtr::svg
