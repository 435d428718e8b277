#pragma once

// Dependency-free SVG line charts for traces and spectra. Output is
// byte-deterministic for identical inputs.

#include <string>
#include <vector>

#include "swingsim/spectral.hpp"
#include "swingsim/trace.hpp"

namespace swingsim {

struct PlotSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

PlotSeries to_series(const PowerTrace& trace, const std::string& label);
PlotSeries to_series(const Spectrum& spectrum, const std::string& label);

/// Single-axis line chart. Long series are min/max-decimated to keep files
/// reviewable; the envelope is preserved.
void plot_lines(const std::vector<PlotSeries>& series, const std::string& x_label,
                const std::string& y_label, const std::string& path);

/// Two y-axes sharing one x-axis (left: e.g. grid power, right: e.g. SoC).
void plot_dual_axis(const std::vector<PlotSeries>& left_series,
                    const std::vector<PlotSeries>& right_series, const std::string& x_label,
                    const std::string& y_left_label, const std::string& y_right_label,
                    const std::string& path);

}  // namespace swingsim
