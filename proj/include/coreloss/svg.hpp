#pragma once

#include <string>
#include <vector>

namespace coreloss {

// Minimal static plot emitter: fixed layout, fixed number formatting, no
// external assets, so identical inputs give byte-identical files.

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
  std::string color;  // empty = palette by index
};

struct PlotOptions {
  int width = 760;
  int height = 480;
  std::string title;
  std::string x_label;
  std::string y_label;
};

void write_svg_plot(const std::string& path, const std::vector<PlotSeries>& series,
                    const PlotOptions& opt);

// Stacked per-index bars (lower segment drawn from zero, upper on top of it).
struct StackedBars {
  std::vector<double> lower;
  std::vector<double> upper;  // same length
  std::string lower_label;
  std::string upper_label;
};

void write_svg_bars(const std::string& path, const StackedBars& bars, const PlotOptions& opt);

}  // namespace coreloss
