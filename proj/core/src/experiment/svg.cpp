#include "mgap/experiment/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mgap/errors.hpp"

namespace mgap {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 72, kRight = 24, kTop = 44, kBottom = 56;

const char* kPalette[] = {"#31688e", "#d95f02", "#1b9e77",
                          "#d02b4c", "#7550a6", "#6a6a6a"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;

  double transform(double v) const { return log ? std::log10(v) : v; }
  bool admits(double v) const { return !log || v > 0.0; }

  // fraction of the axis span, 0 at lo
  double frac(double v) const {
    const double a = transform(lo), b = transform(hi);
    if (b == a) return 0.5;
    return (transform(v) - a) / (b - a);
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e0; e <= e1; ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * 0.999 && v <= hi * 1.001) t.push_back(v);
      }
      if (t.size() < 2) t = {lo, hi};
    } else {
      for (int i = 0; i <= 4; ++i)
        t.push_back(lo + (hi - lo) * static_cast<double>(i) / 4.0);
    }
    return t;
  }
};

}  // namespace

std::string render_line_plot_svg(const PlotSpec& spec) {
  if (spec.series.empty()) throw config_error("plot needs at least one series");

  Axis x_axis, y_axis;
  x_axis.log = spec.log_x;
  y_axis.log = spec.log_y;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const PlotSeries& s : spec.series) {
    if (s.xs.size() != s.ys.size())
      throw config_error("plot series length mismatch");
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!x_axis.admits(s.xs[i]) || !y_axis.admits(s.ys[i])) continue;
      x_lo = std::min(x_lo, s.xs[i]);
      x_hi = std::max(x_hi, s.xs[i]);
      y_lo = std::min(y_lo, s.ys[i]);
      y_hi = std::max(y_hi, s.ys[i]);
    }
  }
  if (!(x_lo <= x_hi)) { x_lo = spec.log_x ? 0.1 : 0.0; x_hi = 1.0; }
  if (!(y_lo <= y_hi)) { y_lo = spec.log_y ? 0.1 : 0.0; y_hi = 1.0; }
  if (x_lo == x_hi) { x_lo -= 0.5; x_hi += 0.5; }
  if (y_lo == y_hi) {
    if (spec.log_y) { y_lo *= 0.5; y_hi *= 2.0; }
    else { y_lo -= 0.5; y_hi += 0.5; }
  }
  if (spec.log_x && x_lo <= 0.0) x_lo = 1e-12;
  if (spec.log_y && y_lo <= 0.0) y_lo = 1e-12;
  x_axis.lo = x_lo; x_axis.hi = x_hi;
  y_axis.lo = y_lo; y_axis.hi = y_hi;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + x_axis.frac(v) * pw; };
  const auto py = [&](double v) { return kTop + (1.0 - y_axis.frac(v)) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" + spec.title +
         "</text>\n";

  // frame
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"#222\"/>\n";

  for (const double t : x_axis.ticks()) {
    const double X = px(t);
    svg += "<line x1=\"" + num(X) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" +
           num(X) + "\" y2=\"" + num(kTop + ph + 5) + "\" stroke=\"#222\"/>\n";
    svg += "<text x=\"" + num(X) + "\" y=\"" + num(kTop + ph + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(t) + "</text>\n";
  }
  for (const double t : y_axis.ticks()) {
    const double Y = py(t);
    svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(Y) + "\" x2=\"" +
           num(kLeft) + "\" y2=\"" + num(Y) + "\" stroke=\"#222\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(Y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(t) + "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" +
         num(kHeight - 12) + "\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"13\">" + spec.x_label +
         "</text>\n";
  svg += "<text x=\"18\" y=\"" + num(kTop + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 " + num(kTop + ph / 2) +
         ")\">" + spec.y_label + "</text>\n";

  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const PlotSeries& s = spec.series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    std::string points;
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!x_axis.admits(s.xs[i]) || !y_axis.admits(s.ys[i])) continue;
      if (!points.empty()) points += ' ';
      points += num(px(s.xs[i])) + "," + num(py(s.ys[i]));
    }
    if (!points.empty()) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.6\" points=\"" + points + "\"/>\n";
    }
    const double ly = kTop + 14 + 16 * static_cast<double>(si);
    svg += "<line x1=\"" + num(kLeft + pw - 130) + "\" y1=\"" + num(ly - 4) +
           "\" x2=\"" + num(kLeft + pw - 110) + "\" y2=\"" + num(ly - 4) +
           "\" stroke=\"" + color + "\" stroke-width=\"1.6\"/>\n";
    svg += "<text x=\"" + num(kLeft + pw - 104) + "\" y=\"" + num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace mgap
