#pragma once

#include <filesystem>
#include <span>
#include <string>

namespace rollekit::svg {

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_y = false;  // plot log10 of |y| (zeros clamped)
  int width = 900;
  int height = 560;
};

// Static single-series line chart.
void write_line_svg(const std::filesystem::path& path, std::span<const double> xs,
                    std::span<const double> ys, const PlotOptions& options);

}  // namespace rollekit::svg
