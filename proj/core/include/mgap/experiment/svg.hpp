#pragma once

#include <string>
#include <vector>

namespace mgap {

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

// Static line plot; output depends only on the spec, so plot files are as
// reproducible as the data files.
std::string render_line_plot_svg(const PlotSpec& spec);

}  // namespace mgap
