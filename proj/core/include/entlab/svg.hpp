#pragma once

#include <string>
#include <vector>

namespace entlab {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool markers = false;
    bool step = false;  // draw as histogram steps between consecutive x
};

struct PlotPanel {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_x = false;
    bool symlog_y = false;
    double symlog_threshold = 1.0;
    std::vector<PlotSeries> series;
};

// Panels are stacked vertically in one standalone SVG document.
std::string render_svg(const std::vector<PlotPanel>& panels, int width = 640, int panel_height = 360);

}  // namespace entlab
