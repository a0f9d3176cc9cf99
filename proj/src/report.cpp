#include "lfdr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

namespace lfdr {

namespace {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::string format_coord(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

}  // namespace

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << "policy,T,benchmark,mean_regret,stderr,mean_reward,replications,seed\n";
  for (const ResultRow& row : result.rows) {
    out << row.policy << ',' << row.horizon << ',' << row.benchmark << ','
        << format_double(row.mean_regret) << ',' << format_double(row.stderr_regret) << ','
        << format_double(row.mean_reward) << ',' << row.replications << ',' << row.seed << '\n';
  }
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  write_csv(out, result);
  return out.str();
}

void write_svg(std::ostream& out, const ExperimentResult& result, const std::string& title) {
  struct Series {
    std::vector<std::pair<double, double>> points;  // (T, mean_regret)
  };
  std::map<std::string, Series> series;
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool have_point = false;
  for (const ResultRow& row : result.rows) {
    if (row.mean_regret <= 0.0 || row.horizon <= 0) continue;
    const double x = std::log(static_cast<double>(row.horizon));
    const double y = std::log(row.mean_regret);
    series[row.policy + " vs " + row.benchmark].points.emplace_back(x, y);
    if (!have_point) {
      min_x = max_x = x;
      min_y = max_y = y;
      have_point = true;
    } else {
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x - min_x < 1e-12) max_x = min_x + 1.0;
  if (max_y - min_y < 1e-12) max_y = min_y + 1.0;

  const double width = 720.0, height = 480.0;
  const double left = 70.0, right = 30.0, top = 48.0, bottom = 56.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto sx = [&](double x) { return left + (x - min_x) / (max_x - min_x) * plot_w; };
  const auto sy = [&](double y) { return top + (max_y - y) / (max_y - min_y) * plot_h; };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  const int num_colors = static_cast<int>(sizeof(kColors) / sizeof(kColors[0]));

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"26\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  // Axes.
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
         "horizon T (log scale)</text>\n";
  out << "<text x=\"20\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 20 "
      << top + plot_h / 2 << ")\">mean regret (log scale)</text>\n";

  // Tick labels at the data extremes (values in original units).
  out << "<text x=\"" << format_coord(sx(min_x)) << "\" y=\"" << top + plot_h + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(std::exp(min_x)) << "</text>\n";
  out << "<text x=\"" << format_coord(sx(max_x)) << "\" y=\"" << top + plot_h + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(std::exp(max_x)) << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << format_coord(sy(min_y) + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(std::exp(min_y)) << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << format_coord(sy(max_y) + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(std::exp(max_y)) << "</text>\n";

  int index = 0;
  double legend_y = top + 8.0;
  for (const auto& [label, data] : series) {
    const char* color = kColors[index % num_colors];
    if (!data.points.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
      for (const auto& [x, y] : data.points)
        out << format_coord(sx(x)) << ',' << format_coord(sy(y)) << ' ';
      out << "\"/>\n";
      for (const auto& [x, y] : data.points)
        out << "<circle cx=\"" << format_coord(sx(x)) << "\" cy=\"" << format_coord(sy(y))
            << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
    }
    out << "<rect x=\"" << left + plot_w - 178 << "\" y=\"" << format_coord(legend_y - 8)
        << "\" width=\"14\" height=\"3\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << left + plot_w - 158 << "\" y=\"" << format_coord(legend_y - 3)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
    legend_y += 16.0;
    ++index;
  }
  out << "</svg>\n";
}

}  // namespace lfdr
