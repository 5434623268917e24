#include "rollekit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "rollekit/errors.hpp"

namespace rollekit::svg {

namespace {

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string tick_label(double v, bool log_scale) {
  if (log_scale) return "1e" + fmt(v, "%.0f");
  return fmt(v, "%.4g");
}

}  // namespace

void write_line_svg(const std::filesystem::path& path, std::span<const double> xs,
                    std::span<const double> ys, const PlotOptions& options) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error("svg plot needs matching x/y series with at least two points");
  }

  std::vector<double> py(ys.begin(), ys.end());
  if (options.log_y) {
    double min_pos = 0.0;
    for (double v : ys) {
      const double a = std::abs(v);
      if (a > 0.0 && (min_pos == 0.0 || a < min_pos)) min_pos = a;
    }
    if (min_pos == 0.0) min_pos = 1e-300;
    for (double& v : py) v = std::log10(std::max(std::abs(v), min_pos * 1e-3));
  }

  double x_min = xs[0], x_max = xs[0], y_min = py[0], y_max = py[0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x_min = std::min(x_min, xs[i]);
    x_max = std::max(x_max, xs[i]);
    y_min = std::min(y_min, py[i]);
    y_max = std::max(y_max, py[i]);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    y_max += 0.5;
    y_min -= 0.5;
  }

  const double ml = 84, mr = 24, mt = 40, mb = 56;
  const double pw = options.width - ml - mr;
  const double ph = options.height - mt - mb;
  auto sx = [&](double x) { return ml + pw * (x - x_min) / (x_max - x_min); };
  auto sy = [&](double y) { return mt + ph * (1.0 - (y - y_min) / (y_max - y_min)); };

  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
      << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << " "
      << options.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << options.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << options.title << "</text>\n";

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double xv = x_min + (x_max - x_min) * i / ticks;
    const double yv = y_min + (y_max - y_min) * i / ticks;
    const double gx = sx(xv);
    const double gy = sy(yv);
    out << "<line x1=\"" << fmt(gx) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(gx)
        << "\" y2=\"" << fmt(mt + ph) << "\" stroke=\"#dddddd\"/>\n";
    out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(gy) << "\" x2=\"" << fmt(ml + pw)
        << "\" y2=\"" << fmt(gy) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << fmt(gx) << "\" y=\"" << fmt(mt + ph + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(xv, false) << "</text>\n";
    out << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(yv, options.log_y) << "</text>\n";
  }
  out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << options.width / 2 << "\" y=\"" << options.height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << options.x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << options.height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 18 " << options.height / 2 << ")\">" << options.y_label
      << "</text>\n";

  // decimate long series; the plot cannot resolve more than ~4 px-wide steps
  const std::size_t max_points = 4000;
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / max_points);
  out << "<polyline fill=\"none\" stroke=\"#1f6fb4\" stroke-width=\"1.2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); i += stride) {
    out << fmt(sx(xs[i])) << ',' << fmt(sy(py[i])) << ' ';
  }
  if ((xs.size() - 1) % stride != 0) {
    out << fmt(sx(xs.back())) << ',' << fmt(sy(py.back()));
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace rollekit::svg
