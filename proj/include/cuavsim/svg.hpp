#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuavsim/csv.hpp"

namespace cuavsim {

namespace detail {

inline std::string basename_of(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.rfind(".csv");
  if (dot != std::string::npos && dot == name.size() - 4) name.erase(dot);
  return name;
}

inline std::string format_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace detail

// Renders the chosen metric of each CSV as one polyline in a self-contained
// SVG chart. Legend labels come from the file names. Long series are thinned
// to keep the file size bounded; empty series contribute no polyline.
inline void emit_plot(const std::vector<std::string>& csv_paths, const std::string& out_path,
                      const std::string& metric = "avg_reward_ma") {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  constexpr int kWidth = 960, kHeight = 600;
  constexpr int kLeft = 70, kRight = 160, kTop = 30, kBottom = 50;
  constexpr int kMaxPoints = 2000;

  struct Series {
    std::string label;
    std::vector<double> x, y;
  };
  std::vector<Series> series;
  for (const auto& path : csv_paths) {
    const CsvTable table = read_csv(path);
    Series s;
    s.label = detail::basename_of(path);
    s.x = table.column("slot");
    s.y = table.column(metric);
    series.push_back(std::move(s));
  }

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool any = false;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        any = true;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double v) { return kTop + plot_h - (v - y_min) / (y_max - y_min) * plot_h; };

  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("emit_plot: cannot open " + out_path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes and ticks
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
     << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kTop + plot_h << "\"/>\n";
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / kTicks;
    const double fy = y_min + (y_max - y_min) * i / kTicks;
    os << "<line stroke=\"black\" x1=\"" << sx(fx) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
       << sx(fx) << "\" y2=\"" << kTop + plot_h + 5 << "\"/>\n";
    os << "<text x=\"" << sx(fx) << "\" y=\"" << kTop + plot_h + 20
       << "\" text-anchor=\"middle\">" << detail::format_tick(fx) << "</text>\n";
    os << "<line stroke=\"black\" x1=\"" << kLeft - 5 << "\" y1=\"" << sy(fy) << "\" x2=\""
       << kLeft << "\" y2=\"" << sy(fy) << "\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(fy) + 4 << "\" text-anchor=\"end\">"
       << detail::format_tick(fy) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\">slot</text>\n";
  os << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\""
     << "rotate(-90 18 " << kTop + plot_h / 2 << ")\">" << metric << "</text>\n";
  os << "</g>\n";

  // one polyline per non-empty series
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.x.empty()) continue;
    const auto stride = std::max<std::size_t>(1, s.x.size() / kMaxPoints);
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 8]
       << "\" stroke-width=\"1.5\" points=\"";
    char buf[64];
    for (std::size_t j = 0; j < s.x.size(); j += stride) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(s.x[j]), sy(s.y[j]));
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f", sx(s.x.back()), sy(s.y.back()));
    os << buf << "\"/>\n";
  }

  // legend
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = kTop + 10 + 18.0 * i;
    os << "<line x1=\"" << kLeft + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\""
       << kLeft + plot_w + 34 << "\" y2=\"" << ly << "\" stroke=\"" << kPalette[i % 8]
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + plot_w + 40 << "\" y=\"" << ly + 4 << "\">" << series[i].label
       << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  if (!os) throw std::runtime_error("emit_plot: write failed for " + out_path);
}

}  // namespace cuavsim
