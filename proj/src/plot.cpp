#include "swingsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace swingsim {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 72;
constexpr int kMarginTop = 24;
constexpr int kMarginBottom = 56;
constexpr std::size_t kMaxPointsPerSeries = 4000;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

Range data_range(const std::vector<PlotSeries>& series, bool use_x) {
    Range r{HUGE_VAL, -HUGE_VAL};
    for (const auto& s : series)
        for (double v : use_x ? s.xs : s.ys) r.include(v);
    if (!(r.lo <= r.hi)) throw std::invalid_argument("plot: empty series");
    if (r.lo == r.hi) {  // degenerate span, widen symmetrically
        const double pad = r.lo == 0.0 ? 1.0 : std::abs(r.lo) * 0.1;
        r.lo -= pad;
        r.hi += pad;
    }
    return r;
}

// Nice-number axis ticks, about five per axis.
std::vector<double> nice_ticks(const Range& r) {
    const double span = r.hi - r.lo;
    const double rough = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(rough)));
    const double norm = rough / mag;
    double step = 10.0 * mag;
    if (norm <= 1.5)
        step = 1.0 * mag;
    else if (norm <= 3.0)
        step = 2.0 * mag;
    else if (norm <= 7.0)
        step = 5.0 * mag;
    std::vector<double> ticks;
    for (double t = std::ceil(r.lo / step) * step; t <= r.hi + step * 1e-9; t += step)
        ticks.push_back(t == 0.0 ? 0.0 : t);
    return ticks;
}

// Min/max decimation: keeps each bucket's extrema in index order.
void decimate(const std::vector<double>& xs, const std::vector<double>& ys,
              std::vector<double>& out_x, std::vector<double>& out_y) {
    const std::size_t n = xs.size();
    if (n <= kMaxPointsPerSeries) {
        out_x = xs;
        out_y = ys;
        return;
    }
    const std::size_t buckets = kMaxPointsPerSeries / 2;
    out_x.reserve(2 * buckets);
    out_y.reserve(2 * buckets);
    for (std::size_t b = 0; b < buckets; ++b) {
        const std::size_t lo = b * n / buckets;
        const std::size_t hi = std::max(lo + 1, (b + 1) * n / buckets);
        std::size_t i_min = lo, i_max = lo;
        for (std::size_t i = lo; i < hi; ++i) {
            if (ys[i] < ys[i_min]) i_min = i;
            if (ys[i] > ys[i_max]) i_max = i;
        }
        const std::size_t first = std::min(i_min, i_max);
        const std::size_t second = std::max(i_min, i_max);
        out_x.push_back(xs[first]);
        out_y.push_back(ys[first]);
        if (second != first) {
            out_x.push_back(xs[second]);
            out_y.push_back(ys[second]);
        }
    }
}

class SvgWriter {
public:
    explicit SvgWriter(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
        if (!f_) throw std::runtime_error("plot: cannot open " + path + " for writing");
        write("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        write("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
              "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
              std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n");
        write("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    }
    ~SvgWriter() {
        if (f_) std::fclose(f_);
    }
    void write(const std::string& s) { std::fputs(s.c_str(), f_); }
    void close() {
        write("</svg>\n");
        if (std::fclose(f_) != 0) {
            f_ = nullptr;
            throw std::runtime_error("plot: write failed");
        }
        f_ = nullptr;
    }

private:
    std::FILE* f_;
};

double map_x(double v, const Range& r) {
    return kMarginLeft + (v - r.lo) / (r.hi - r.lo) * (kWidth - kMarginLeft - kMarginRight);
}

double map_y(double v, const Range& r) {
    return kHeight - kMarginBottom -
           (v - r.lo) / (r.hi - r.lo) * (kHeight - kMarginTop - kMarginBottom);
}

void draw_axes(SvgWriter& svg, const Range& xr, const Range& yr, const std::string& x_label,
               const std::string& y_label) {
    const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    svg.write("<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">\n");
    svg.write("<line x1=\"" + std::to_string(x0) + "\" y1=\"" + std::to_string(y0) + "\" x2=\"" +
              std::to_string(x1) + "\" y2=\"" + std::to_string(y0) + "\"/>\n");
    svg.write("<line x1=\"" + std::to_string(x0) + "\" y1=\"" + std::to_string(y0) + "\" x2=\"" +
              std::to_string(x0) + "\" y2=\"" + std::to_string(y1) + "\"/>\n");
    svg.write("</g>\n");
    svg.write("<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n");
    for (double t : nice_ticks(xr)) {
        const double px = map_x(t, xr);
        svg.write("<line x1=\"" + fmt("%.2f", px) + "\" y1=\"" + std::to_string(y0) + "\" x2=\"" +
                  fmt("%.2f", px) + "\" y2=\"" + std::to_string(y0 + 5) +
                  "\" stroke=\"#333\"/>\n");
        svg.write("<text x=\"" + fmt("%.2f", px) + "\" y=\"" + std::to_string(y0 + 18) +
                  "\" text-anchor=\"middle\">" + fmt("%.6g", t) + "</text>\n");
    }
    for (double t : nice_ticks(yr)) {
        const double py = map_y(t, yr);
        svg.write("<line x1=\"" + std::to_string(x0 - 5) + "\" y1=\"" + fmt("%.2f", py) +
                  "\" x2=\"" + std::to_string(x0) + "\" y2=\"" + fmt("%.2f", py) +
                  "\" stroke=\"#333\"/>\n");
        svg.write("<text x=\"" + std::to_string(x0 - 8) + "\" y=\"" + fmt("%.2f", py + 4) +
                  "\" text-anchor=\"end\">" + fmt("%.6g", t) + "</text>\n");
    }
    svg.write("<text x=\"" + std::to_string((x0 + x1) / 2) + "\" y=\"" +
              std::to_string(kHeight - 12) + "\" text-anchor=\"middle\">" + xml_escape(x_label) +
              "</text>\n");
    svg.write("<text x=\"16\" y=\"" + std::to_string((y0 + y1) / 2) +
              "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
              std::to_string((y0 + y1) / 2) + ")\">" + xml_escape(y_label) + "</text>\n");
    svg.write("</g>\n");
}

void draw_series(SvgWriter& svg, const PlotSeries& s, const Range& xr, const Range& yr,
                 const char* color, const char* dash) {
    std::vector<double> xs, ys;
    decimate(s.xs, s.ys, xs, ys);
    std::string pts;
    pts.reserve(xs.size() * 14);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        pts += fmt("%.2f", map_x(xs[i], xr));
        pts += ",";
        pts += fmt("%.2f", map_y(ys[i], yr));
        if (i + 1 < xs.size()) pts += " ";
    }
    svg.write(std::string("<polyline fill=\"none\" stroke=\"") + color + "\"" +
              (dash ? std::string(" stroke-dasharray=\"") + dash + "\"" : "") +
              " stroke-width=\"1.5\" points=\"" + pts + "\"/>\n");
}

void draw_legend(SvgWriter& svg, const std::vector<std::string>& labels,
                 const std::vector<const char*>& colors) {
    svg.write("<g font-family=\"sans-serif\" font-size=\"12\">\n");
    int y = kMarginTop + 12;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int x = kWidth - kMarginRight - 180;
        svg.write(std::string("<line x1=\"") + std::to_string(x) + "\" y1=\"" +
                  std::to_string(y - 4) + "\" x2=\"" + std::to_string(x + 24) + "\" y2=\"" +
                  std::to_string(y - 4) + "\" stroke=\"" + colors[i] +
                  "\" stroke-width=\"2\"/>\n");
        svg.write("<text x=\"" + std::to_string(x + 30) + "\" y=\"" + std::to_string(y) +
                  "\" fill=\"#333\">" + xml_escape(labels[i]) + "</text>\n");
        y += 18;
    }
    svg.write("</g>\n");
}

void check_series(const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("plot: no series given");
    for (const auto& s : series) {
        if (s.xs.empty() || s.xs.size() != s.ys.size())
            throw std::invalid_argument("plot: empty or mismatched series '" + s.label + "'");
    }
}

}  // namespace

PlotSeries to_series(const PowerTrace& trace, const std::string& label) {
    PlotSeries s;
    s.label = label;
    s.xs.resize(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) s.xs[i] = trace.time_at(i);
    s.ys = trace.samples;
    return s;
}

PlotSeries to_series(const Spectrum& spectrum, const std::string& label) {
    PlotSeries s;
    s.label = label;
    s.xs = spectrum.freqs_hz;
    s.ys = spectrum.magnitudes;
    return s;
}

void plot_lines(const std::vector<PlotSeries>& series, const std::string& x_label,
                const std::string& y_label, const std::string& path) {
    check_series(series);
    const Range xr = data_range(series, true);
    const Range yr = data_range(series, false);

    SvgWriter svg(path);
    draw_axes(svg, xr, yr, x_label, y_label);
    std::vector<std::string> labels;
    std::vector<const char*> colors;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        draw_series(svg, series[i], xr, yr, color, nullptr);
        labels.push_back(series[i].label);
        colors.push_back(color);
    }
    draw_legend(svg, labels, colors);
    svg.close();
}

void plot_dual_axis(const std::vector<PlotSeries>& left_series,
                    const std::vector<PlotSeries>& right_series, const std::string& x_label,
                    const std::string& y_left_label, const std::string& y_right_label,
                    const std::string& path) {
    check_series(left_series);
    check_series(right_series);
    std::vector<PlotSeries> all = left_series;
    all.insert(all.end(), right_series.begin(), right_series.end());
    const Range xr = data_range(all, true);
    const Range ylr = data_range(left_series, false);
    const Range yrr = data_range(right_series, false);

    SvgWriter svg(path);
    draw_axes(svg, xr, ylr, x_label, y_left_label);

    // Right axis.
    const int x1 = kWidth - kMarginRight;
    const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    svg.write("<line x1=\"" + std::to_string(x1) + "\" y1=\"" + std::to_string(y0) + "\" x2=\"" +
              std::to_string(x1) + "\" y2=\"" + std::to_string(y1) +
              "\" stroke=\"#333\" stroke-width=\"1\"/>\n");
    svg.write("<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n");
    for (double t : nice_ticks(yrr)) {
        const double py = map_y(t, yrr);
        svg.write("<line x1=\"" + std::to_string(x1) + "\" y1=\"" + fmt("%.2f", py) + "\" x2=\"" +
                  std::to_string(x1 + 5) + "\" y2=\"" + fmt("%.2f", py) +
                  "\" stroke=\"#333\"/>\n");
        svg.write("<text x=\"" + std::to_string(x1 + 8) + "\" y=\"" + fmt("%.2f", py + 4) +
                  "\" text-anchor=\"start\">" + fmt("%.6g", t) + "</text>\n");
    }
    svg.write("<text x=\"" + std::to_string(kWidth - 16) + "\" y=\"" +
              std::to_string((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(90 " +
              std::to_string(kWidth - 16) + " " + std::to_string((y0 + y1) / 2) + ")\">" +
              xml_escape(y_right_label) + "</text>\n");
    svg.write("</g>\n");

    std::vector<std::string> labels;
    std::vector<const char*> colors;
    std::size_t ci = 0;
    for (const auto& s : left_series) {
        const char* color = kPalette[ci++ % (sizeof(kPalette) / sizeof(kPalette[0]))];
        draw_series(svg, s, xr, ylr, color, nullptr);
        labels.push_back(s.label);
        colors.push_back(color);
    }
    for (const auto& s : right_series) {
        const char* color = kPalette[ci++ % (sizeof(kPalette) / sizeof(kPalette[0]))];
        draw_series(svg, s, xr, yrr, color, "4 3");
        labels.push_back(s.label);
        colors.push_back(color);
    }
    draw_legend(svg, labels, colors);
    svg.close();
}

}  // namespace swingsim
