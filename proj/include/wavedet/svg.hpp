#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace wavedet {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Self-contained line chart (no external assets). Intended for quick looks
/// at Pd curves and coefficient profiles, not publication plots.
inline std::string render_line_chart(const std::string& title,
                                     const std::string& x_label,
                                     const std::string& y_label,
                                     const std::vector<SvgSeries>& series,
                                     int width = 860, int height = 540) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
                                   "#bcbd22", "#e377c2"};
  const double ml = 70, mr = 170, mt = 48, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (!(x_min < x_max)) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (!(y_min < y_max)) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

  std::ostringstream out;
  out.precision(10);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  const int n_ticks = 6;
  for (int i = 0; i <= n_ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / n_ticks;
    const double fy = y_min + (y_max - y_min) * i / n_ticks;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << mt << "\" x2=\"" << px(fx)
        << "\" y2=\"" << mt + ph << "\" stroke=\"#dddddd\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << py(fy) << "\" x2=\"" << ml + pw
        << "\" y2=\"" << py(fy) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << std::round(fx * 1000) / 1000 << "</text>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << std::round(fy * 1000) / 1000 << "</text>\n";
  }
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444444\"/>\n"
      << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n"
      << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (auto [x, y] : series[si].points) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    const double ly = mt + 16 + 18 * static_cast<double>(si);
    out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[si].label
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace wavedet
