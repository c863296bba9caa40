#pragma once

#include <string>
#include <vector>

namespace cscale {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Axes {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

struct Panel {
    Axes axes;
    std::vector<Series> series;
};

inline constexpr int kCanvasWidth = 800;
inline constexpr int kCanvasHeight = 500;

// Deterministic SVG line chart(s) on a fixed 800x500 canvas, panels laid out
// row-major in `columns` columns. Throws ValidationError on empty input or
// non-positive data on a log axis.
std::string render_svg(const std::vector<Panel>& panels, int columns = 1);

// Exact plotted data as CSV `panel,series,x,y`.
std::string plot_csv(const std::vector<Panel>& panels);

// Writes `out` (SVG) for a single chart.
void emit_svg(const std::vector<Series>& series, const Axes& axes, const std::string& out);

// Writes <stem>.svg and its paired <stem>.csv.
void write_plot(const std::vector<Panel>& panels, int columns, const std::string& stem);

}  // namespace cscale
