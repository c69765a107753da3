#include "entlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace entlab {
namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s)
{
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

double symlog(double y, double t)
{
    return std::copysign(std::log10(1.0 + std::abs(y) / t), y);
}

}  // namespace

std::string render_svg(const std::vector<PlotPanel>& panels, int width, int panel_height)
{
    std::ostringstream os;
    const int H = panel_height * static_cast<int>(std::max<std::size_t>(1, panels.size()));
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double ml = 70, mr = 150, mt = 30, mb = 45;
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const PlotPanel& pan = panels[p];
        const double top = static_cast<double>(p) * panel_height;
        auto tx = [&](double x) { return pan.log_x ? std::log10(x) : x; };
        auto ty = [&](double y) { return pan.symlog_y ? symlog(y, pan.symlog_threshold) : y; };
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (const auto& s : pan.series)
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (pan.log_x && !(s.x[i] > 0.0)) continue;
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                x0 = std::min(x0, tx(s.x[i]));
                x1 = std::max(x1, tx(s.x[i]));
                y0 = std::min(y0, ty(s.y[i]));
                y1 = std::max(y1, ty(s.y[i]));
            }
        if (!std::isfinite(x0)) {
            x0 = 0;
            x1 = 1;
            y0 = 0;
            y1 = 1;
        }
        if (x1 == x0) x1 = x0 + 1;
        y0 = std::min(y0, 0.0);
        if (y1 == y0) y1 = y0 + 1;
        const double pw = width - ml - mr;
        const double ph = panel_height - mt - mb;
        auto px = [&](double x) { return ml + (tx(x) - x0) / (x1 - x0) * pw; };
        auto py = [&](double y) { return top + mt + ph - (ty(y) - y0) / (y1 - y0) * ph; };

        os << "<g>\n";
        os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(top + 18)
           << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(pan.title) << "</text>\n";
        os << "<rect x=\"" << num(ml) << "\" y=\"" << num(top + mt) << "\" width=\"" << num(pw)
           << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int k = 0; k <= 4; ++k) {
            double fx = x0 + (x1 - x0) * k / 4.0;
            double vx = pan.log_x ? std::pow(10.0, fx) : fx;
            double X = ml + pw * k / 4.0;
            os << "<text x=\"" << num(X) << "\" y=\"" << num(top + mt + ph + 15)
               << "\" text-anchor=\"middle\">" << tick_label(vx) << "</text>\n";
            double fy = y0 + (y1 - y0) * k / 4.0;
            double vy = pan.symlog_y ? std::copysign((std::pow(10.0, std::abs(fy)) - 1.0) * pan.symlog_threshold, fy) : fy;
            double Y = top + mt + ph - ph * k / 4.0;
            os << "<text x=\"" << num(ml - 5) << "\" y=\"" << num(Y + 4)
               << "\" text-anchor=\"end\">" << tick_label(vy) << "</text>\n";
        }
        os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(top + panel_height - 8)
           << "\" text-anchor=\"middle\">" << escape(pan.xlabel) << "</text>\n";
        os << "<text transform=\"translate(14," << num(top + mt + ph / 2)
           << ") rotate(-90)\" text-anchor=\"middle\">" << escape(pan.ylabel) << "</text>\n";

        int li = 0;
        for (const auto& s : pan.series) {
            std::ostringstream pts;
            std::size_t n = std::min(s.x.size(), s.y.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (pan.log_x && !(s.x[i] > 0.0)) continue;
                if (!std::isfinite(s.y[i])) continue;
                if (s.step && i + 1 < n) {
                    pts << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
                    pts << num(px(s.x[i + 1])) << ',' << num(py(s.y[i])) << ' ';
                } else {
                    pts << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
                }
            }
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\""
               << pts.str() << "\"/>\n";
            if (s.markers)
                for (std::size_t i = 0; i < n; ++i) {
                    if (pan.log_x && !(s.x[i] > 0.0)) continue;
                    os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                       << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
                }
            double ly = top + mt + 12 + 16 * li++;
            os << "<line x1=\"" << num(ml + pw + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
               << num(ml + pw + 30) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color
               << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << num(ml + pw + 35) << "\" y=\"" << num(ly) << "\">" << escape(s.label)
               << "</text>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace entlab
