#include "coreloss/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "coreloss/errors.hpp"

namespace coreloss {

namespace {

constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 34;
constexpr int kMarginBottom = 52;

const char* kPalette[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#8e6bbf", "#c98a22", "#4f5d75"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

// Pad degenerate ranges so the mapping below stays finite.
Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::abs(lo) > 0.0 ? std::abs(lo) * 0.5 : 1.0;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

// Largest 1/2/5-ladder step giving at most `max_ticks` intervals.
double tick_step(const Range& r, int max_ticks) {
  const double raw = (r.hi - r.lo) / max_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) return mag * m;
  }
  return mag * 10.0;
}

class Canvas {
 public:
  Canvas(const PlotOptions& opt, Range xr, Range yr)
      : opt_(opt), xr_(xr), yr_(yr),
        plot_w_(opt.width - kMarginLeft - kMarginRight),
        plot_h_(opt.height - kMarginTop - kMarginBottom) {}

  double sx(double x) const {
    return kMarginLeft + (x - xr_.lo) / (xr_.hi - xr_.lo) * plot_w_;
  }
  double sy(double y) const {
    return kMarginTop + plot_h_ - (y - yr_.lo) / (yr_.hi - yr_.lo) * plot_h_;
  }

  void open(std::ofstream& out) const {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt_.width << "\" height=\""
        << opt_.height << "\" viewBox=\"0 0 " << opt_.width << ' ' << opt_.height << "\">\n";
    out << "<rect width=\"" << opt_.width << "\" height=\"" << opt_.height
        << "\" fill=\"#ffffff\"/>\n";
    if (!opt_.title.empty())
      out << "<text x=\"" << opt_.width / 2 << "\" y=\"20\" font-family=\"sans-serif\" "
          << "font-size=\"14\" text-anchor=\"middle\">" << opt_.title << "</text>\n";
  }

  void axes(std::ofstream& out) const {
    const double x0 = kMarginLeft, x1 = kMarginLeft + plot_w_;
    const double y0 = kMarginTop, y1 = kMarginTop + plot_h_;
    // Ticks and grid first so the frame draws over them.
    const double xs = tick_step(xr_, 6);
    for (double t = std::ceil(xr_.lo / xs) * xs; t <= xr_.hi + 1e-9 * xs; t += xs) {
      const double x = sx(t);
      out << "<line x1=\"" << px(x) << "\" y1=\"" << px(y0) << "\" x2=\"" << px(x) << "\" y2=\""
          << px(y1) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
      out << "<text x=\"" << px(x) << "\" y=\"" << px(y1 + 16)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << num(t)
          << "</text>\n";
    }
    const double ys = tick_step(yr_, 5);
    for (double t = std::ceil(yr_.lo / ys) * ys; t <= yr_.hi + 1e-9 * ys; t += ys) {
      const double y = sy(t);
      out << "<line x1=\"" << px(x0) << "\" y1=\"" << px(y) << "\" x2=\"" << px(x1) << "\" y2=\""
          << px(y) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
      out << "<text x=\"" << px(x0 - 6) << "\" y=\"" << px(y + 4)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(t)
          << "</text>\n";
    }
    out << "<rect x=\"" << px(x0) << "\" y=\"" << px(y0) << "\" width=\"" << px(plot_w_)
        << "\" height=\"" << px(plot_h_)
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    if (!opt_.x_label.empty())
      out << "<text x=\"" << px(x0 + plot_w_ / 2) << "\" y=\"" << px(y1 + 38)
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
          << opt_.x_label << "</text>\n";
    if (!opt_.y_label.empty())
      out << "<text x=\"16\" y=\"" << px(y0 + plot_h_ / 2)
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
          << "transform=\"rotate(-90 16 " << px(y0 + plot_h_ / 2) << ")\">" << opt_.y_label
          << "</text>\n";
  }

  const PlotOptions& opt_;
  Range xr_, yr_;
  double plot_w_, plot_h_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("svg: cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::vector<PlotSeries>& series,
                    const PlotOptions& opt) {
  if (series.empty()) throw ValidationError("svg: no series to plot");
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty())
      throw ValidationError("svg: series '" + s.label + "' malformed");
    for (double v : s.x) { xlo = std::min(xlo, v); xhi = std::max(xhi, v); }
    for (double v : s.y) { ylo = std::min(ylo, v); yhi = std::max(yhi, v); }
  }
  Canvas c(opt, padded(xlo, xhi), padded(ylo, yhi));
  std::ofstream out = open_out(path);
  c.open(out);
  c.axes(out);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const std::string color = s.color.empty() ? kPalette[k % 6] : s.color;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << ' ';
      out << px(c.sx(s.x[i])) << ',' << px(c.sy(s.y[i]));
    }
    out << "\"/>\n";
    if (!s.label.empty())
      out << "<text x=\"" << px(kMarginLeft + 8) << "\" y=\"" << px(kMarginTop + 16 + 14 * k)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">" << s.label
          << "</text>\n";
  }
  out << "</svg>\n";
  out.flush();
  if (!out) throw IoError("svg: failed writing '" + path + "'");
}

void write_svg_bars(const std::string& path, const StackedBars& bars, const PlotOptions& opt) {
  const std::size_t n = bars.lower.size();
  if (n == 0 || bars.upper.size() != n) throw ValidationError("svg: malformed bar data");
  double top = 0.0;
  for (std::size_t i = 0; i < n; ++i) top = std::max(top, bars.lower[i] + bars.upper[i]);
  Canvas c(opt, padded(-0.5, static_cast<double>(n) - 0.5), padded(0.0, top * 1.05));
  std::ofstream out = open_out(path);
  c.open(out);
  c.axes(out);
  const double slot = c.plot_w_ / static_cast<double>(n);
  const double bw = slot * 0.7;
  for (std::size_t i = 0; i < n; ++i) {
    const double xc = c.sx(static_cast<double>(i));
    const double y0 = c.sy(0.0);
    const double y1 = c.sy(bars.lower[i]);
    const double y2 = c.sy(bars.lower[i] + bars.upper[i]);
    out << "<rect x=\"" << px(xc - bw / 2) << "\" y=\"" << px(y1) << "\" width=\"" << px(bw)
        << "\" height=\"" << px(y0 - y1) << "\" fill=\"" << kPalette[0] << "\"/>\n";
    out << "<rect x=\"" << px(xc - bw / 2) << "\" y=\"" << px(y2) << "\" width=\"" << px(bw)
        << "\" height=\"" << px(y1 - y2) << "\" fill=\"" << kPalette[1] << "\"/>\n";
  }
  if (!bars.lower_label.empty())
    out << "<text x=\"" << px(kMarginLeft + 8) << "\" y=\"" << px(kMarginTop + 16)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << kPalette[0] << "\">"
        << bars.lower_label << "</text>\n";
  if (!bars.upper_label.empty())
    out << "<text x=\"" << px(kMarginLeft + 8) << "\" y=\"" << px(kMarginTop + 30)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << kPalette[1] << "\">"
        << bars.upper_label << "</text>\n";
  out << "</svg>\n";
  out.flush();
  if (!out) throw IoError("svg: failed writing '" + path + "'");
}

}  // namespace coreloss
