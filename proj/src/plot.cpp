#include "cscale/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cscale/errors.hpp"
#include "cscale/io.hpp"

namespace cscale {
namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Scale {
    double lo, hi;
    bool log;
    double pixel_lo, pixel_hi;

    double operator()(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double t = ((log ? std::log10(v) : v) - a) / (b - a);
        return pixel_lo + t * (pixel_hi - pixel_lo);
    }
};

std::pair<double, double> range(const std::vector<Series>& series, bool use_x, bool log) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series) {
        for (double v : use_x ? s.x : s.y) {
            if (!std::isfinite(v)) throw ValidationError("plot data must be finite");
            if (log && !(v > 0.0)) throw ValidationError("log axis needs positive data in series '" + s.label + "'");
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (lo == hi) {
        if (log) {
            lo /= 2.0;
            hi *= 2.0;
        } else {
            const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
            lo -= pad;
            hi += pad;
        }
    }
    return {lo, hi};
}

// 1-2-5 steps on linear axes; decades on log axes, with 2 and 5 added when
// the range spans less than three decades.
std::vector<double> ticks(const Scale& s) {
    std::vector<double> out;
    const auto inside = [&](double v) {
        const double tol = 1e-9 * (s.hi - s.lo);
        return v >= s.lo - tol && v <= s.hi + tol;
    };
    if (s.log) {
        const bool fine = std::log10(s.hi / s.lo) < 3.0;
        for (double e = std::floor(std::log10(s.lo)); e <= std::ceil(std::log10(s.hi)); e += 1.0) {
            for (double m : {1.0, 2.0, 5.0}) {
                if (m != 1.0 && !fine) continue;
                const double v = m * std::pow(10.0, e);
                if (inside(v)) out.push_back(v);
            }
        }
        if (out.size() < 2) out = {s.lo, s.hi};
        return out;
    }
    const double raw = (s.hi - s.lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    const double step = (frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0) * mag;
    for (double v = std::ceil(s.lo / step) * step; inside(v); v += step) out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
}

void validate(const std::vector<Panel>& panels) {
    if (panels.empty()) throw ValidationError("nothing to plot");
    for (const auto& p : panels) {
        if (p.series.empty()) throw ValidationError("plot panel '" + p.axes.title + "' has no series");
        for (const auto& s : p.series) {
            if (s.x.empty() || s.x.size() != s.y.size()) {
                throw ValidationError("series '" + s.label + "' is empty or has mismatched x/y lengths");
            }
        }
    }
}

void render_panel(std::string& out, const Panel& panel, double x0, double y0, double w, double h) {
    const double left = x0 + 62, right = x0 + w - 12, top = y0 + 28, bottom = y0 + h - 40;
    const auto [xlo, xhi] = range(panel.series, true, panel.axes.log_x);
    const auto [ylo, yhi] = range(panel.series, false, panel.axes.log_y);
    const Scale sx{xlo, xhi, panel.axes.log_x, left, right};
    const Scale sy{ylo, yhi, panel.axes.log_y, bottom, top};

    out += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(right - left) + "\" height=\"" +
           fixed(bottom - top) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"" + fixed(y0 + 16) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + escape(panel.axes.title) + "</text>\n";
    out += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"" + fixed(y0 + h - 6) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + escape(panel.axes.x_label) + "</text>\n";
    out += "<text x=\"" + fixed(x0 + 12) + "\" y=\"" + fixed((top + bottom) / 2) +
           "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 " + fixed(x0 + 12) + " " +
           fixed((top + bottom) / 2) + ")\">" + escape(panel.axes.y_label) + "</text>\n";
    for (double t : ticks(sx)) {
        out += "<text x=\"" + fixed(sx(t)) + "\" y=\"" + fixed(bottom + 14) +
               "\" text-anchor=\"middle\" font-size=\"10\">" + tick_label(t) + "</text>\n";
    }
    for (double t : ticks(sy)) {
        out += "<text x=\"" + fixed(left - 4) + "\" y=\"" + fixed(sy(t) + 3) +
               "\" text-anchor=\"end\" font-size=\"10\">" + tick_label(t) + "</text>\n";
    }

    for (std::size_t i = 0; i < panel.series.size(); ++i) {
        const auto& s = panel.series[i];
        out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" + std::string(kPalette[i % kPalette.size()]) +
               "\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            out += (k ? " " : "") + fixed(sx(s.x[k])) + "," + fixed(sy(s.y[k]));
        }
        out += "\"><title>" + escape(s.label) + "</title></polyline>\n";
    }
    if (panel.series.size() <= kPalette.size()) {
        for (std::size_t i = 0; i < panel.series.size(); ++i) {
            const double ly = top + 12 + 13.0 * i;
            out += "<text x=\"" + fixed(right - 6) + "\" y=\"" + fixed(ly) + "\" text-anchor=\"end\" font-size=\"10\" fill=\"" +
                   kPalette[i] + "\">" + escape(panel.series[i].label) + "</text>\n";
        }
    }
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels, int columns) {
    validate(panels);
    if (columns < 1) throw ValidationError("plot needs at least one column");
    const int cols = std::min<int>(columns, static_cast<int>(panels.size()));
    const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
    const double w = static_cast<double>(kCanvasWidth) / cols, h = static_cast<double>(kCanvasHeight) / rows;

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kCanvasWidth) + "\" height=\"" +
           std::to_string(kCanvasHeight) + "\" viewBox=\"0 0 " + std::to_string(kCanvasWidth) + " " +
           std::to_string(kCanvasHeight) + "\" font-family=\"sans-serif\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        render_panel(out, panels[i], (i % cols) * w, (i / cols) * h, w, h);
    }
    out += "</svg>\n";
    return out;
}

std::string plot_csv(const std::vector<Panel>& panels) {
    validate(panels);
    std::string out = "panel,series,x,y\n";
    for (const auto& p : panels) {
        for (const auto& s : p.series) {
            for (std::size_t k = 0; k < s.x.size(); ++k) {
                out += p.axes.title + "," + s.label + "," + format_number(s.x[k]) + "," + format_number(s.y[k]) + "\n";
            }
        }
    }
    return out;
}

void emit_svg(const std::vector<Series>& series, const Axes& axes, const std::string& out) {
    write_text_file(out, render_svg({Panel{axes, series}}));
}

void write_plot(const std::vector<Panel>& panels, int columns, const std::string& stem) {
    const std::string svg = render_svg(panels, columns);
    write_text_file(stem + ".csv", plot_csv(panels));
    write_text_file(stem + ".svg", svg);
}

}  // namespace cscale
