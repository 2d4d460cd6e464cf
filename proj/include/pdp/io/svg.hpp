#pragma once

#include <string>
#include <vector>

namespace pdp {

// Minimal line-plot writer so runs can be inspected without external
// plotting tools. Output is deterministic for identical input.
struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotOptions {
  std::string title;
  std::string x_label, y_label;
  bool log_y = false;  // skips non-positive samples
  int width = 760;
  int height = 480;
};

std::string render_svg_plot(const std::vector<PlotSeries>& series,
                            const PlotOptions& opts);
void write_svg_plot(const std::string& path,
                    const std::vector<PlotSeries>& series,
                    const PlotOptions& opts);

}  // namespace pdp
