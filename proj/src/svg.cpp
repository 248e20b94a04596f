#include "garchtrack/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace garchtrack {

namespace {
constexpr int kWidth = 720;
constexpr int kHeight = 440;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#2266cc", "#cc4422", "#22aa55", "#9944cc",
                          "#cc9911", "#116677"};

std::string fmt_tick(double v) {
    std::ostringstream os;
    if (v != 0.0 && (std::abs(v) >= 1e4 || std::abs(v) < 1e-2)) {
        os << std::scientific << std::setprecision(1) << v;
    } else {
        os << std::setprecision(4) << v;
    }
    return os.str();
}
}  // namespace

void write_line_chart_svg(std::ostream& os, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          std::span<const SvgSeries> series) {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const SvgSeries& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    ymin = std::min(ymin, 0.0);

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double v) {
        return kMarginLeft + plot_w * (v - xmin) / (xmax - xmin);
    };
    const auto sy = [&](double v) {
        return kMarginTop + plot_h * (1.0 - (v - ymin) / (ymax - ymin));
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // axes and ticks
    os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
       << kMarginLeft << "\" y2=\"" << kMarginTop + plot_h
       << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h
       << "\" x2=\"" << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
       << "\" stroke=\"black\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / kTicks;
        const double fy = ymin + (ymax - ymin) * i / kTicks;
        os << "<line x1=\"" << sx(fx) << "\" y1=\"" << kMarginTop + plot_h
           << "\" x2=\"" << sx(fx) << "\" y2=\"" << kMarginTop + plot_h + 5
           << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << sx(fx) << "\" y=\"" << kMarginTop + plot_h + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"11\">" << fmt_tick(fx) << "</text>\n"
           << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << sy(fy)
           << "\" x2=\"" << kMarginLeft << "\" y2=\"" << sy(fy)
           << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << sy(fy) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"11\">" << fmt_tick(fy) << "</text>\n";
    }
    os << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << x_label << "</text>\n"
       << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 16 " << kMarginTop + plot_h / 2 << ")\">"
       << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            os << sx(series[s].x[i]) << ',' << sy(series[s].y[i]) << ' ';
        }
        os << "\"/>\n";
        const double ly = kMarginTop + 14.0 * static_cast<double>(s + 1);
        os << "<line x1=\"" << kMarginLeft + plot_w - 120 << "\" y1=\"" << ly
           << "\" x2=\"" << kMarginLeft + plot_w - 100 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << kMarginLeft + plot_w - 95 << "\" y=\"" << ly + 4
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label
           << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace garchtrack
