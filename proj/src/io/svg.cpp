#include "pdp/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "pdp/types.hpp"

namespace pdp {
namespace {

const char* const kPalette[] = {"#1f6fb2", "#d9641e", "#2e8b57",
                                "#b2283c", "#7d4faf", "#5c5c5c"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick step to 1/2/5 times a power of ten.
double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2.0 * mag;
  if (r < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg_plot(const std::vector<PlotSeries>& series,
                            const PlotOptions& opts) {
  const double ml = 70, mr = 20, mt = opts.title.empty() ? 20 : 44, mb = 52;
  const double pw = opts.width - ml - mr;
  const double ph = opts.height - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw DimensionMismatch("render_svg_plot: series '" + s.label +
                              "' has mismatched x/y lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (std::isnan(s.x[i]) || std::isnan(y)) continue;
      if (opts.log_y && y <= 0.0) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = opts.log_y ? 1.0 : 0.0;
    ymax = opts.log_y ? 10.0 : 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (opts.log_y) {
    ymin = std::log10(ymin);
    ymax = std::log10(ymax);
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.04 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const auto px = [&](double x) {
    return ml + pw * (x - xmin) / (xmax - xmin);
  };
  const auto py = [&](double y) {
    const double v = opts.log_y ? std::log10(y) : y;
    return mt + ph * (1.0 - (v - ymin) / (ymax - ymin));
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(opts.width) + "\" height=\"" +
         std::to_string(opts.height) + "\" viewBox=\"0 0 " +
         std::to_string(opts.width) + " " + std::to_string(opts.height) +
         "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    svg += "<text x=\"" + num(ml + pw / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">" +
           escape(opts.title) + "</text>\n";
  }

  // Frame and ticks.
  svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" +
         num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
  const double xstep = nice_step(xmax - xmin, 6);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep;
       t += xstep) {
    const double gx = px(t);
    svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(mt) + "\" x2=\"" +
           num(gx) + "\" y2=\"" + num(mt + ph) +
           "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n";
    svg += "<text x=\"" + num(gx) + "\" y=\"" + num(mt + ph + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           num(t) + "</text>\n";
  }
  if (opts.log_y) {
    for (double e = std::ceil(ymin); e <= std::floor(ymax) + 1e-9; e += 1.0) {
      const double gy = mt + ph * (1.0 - (e - ymin) / (ymax - ymin));
      svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(gy) + "\" x2=\"" +
             num(ml + pw) + "\" y2=\"" + num(gy) +
             "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n";
      svg += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(gy + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">1e" +
             num(e) + "</text>\n";
    }
  } else {
    const double ystep = nice_step(ymax - ymin, 5);
    for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep;
         t += ystep) {
      const double gy = mt + ph * (1.0 - (t - ymin) / (ymax - ymin));
      svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(gy) + "\" x2=\"" +
             num(ml + pw) + "\" y2=\"" + num(gy) +
             "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n";
      svg += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(gy + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">" +
             num(t) + "</text>\n";
    }
  }
  if (!opts.x_label.empty()) {
    svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" +
           num(mt + ph + 40) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" +
           escape(opts.x_label) + "</text>\n";
  }
  if (!opts.y_label.empty()) {
    svg += "<text x=\"16\" y=\"" + num(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 16 " +
           num(mt + ph / 2) + ")\">" + escape(opts.y_label) + "</text>\n";
  }

  // Polylines and legend.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    std::string pts;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      const bool ok =
          !std::isnan(s.x[i]) && !std::isnan(y) && (!opts.log_y || y > 0.0);
      if (!ok) {
        if (pen_down) {
          svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                 "\" stroke-width=\"1.4\" points=\"" + pts + "\"/>\n";
          pts.clear();
          pen_down = false;
        }
        continue;
      }
      pts += num(px(s.x[i])) + "," + num(py(y)) + " ";
      pen_down = true;
    }
    if (pen_down) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.4\" points=\"" + pts + "\"/>\n";
    }
    const double ly = mt + 14 + 16 * static_cast<double>(si);
    svg += "<line x1=\"" + num(ml + pw - 150) + "\" y1=\"" + num(ly - 4) +
           "\" x2=\"" + num(ml + pw - 126) + "\" y2=\"" + num(ly - 4) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(ml + pw - 120) + "\" y=\"" + num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_svg_plot(const std::string& path,
                    const std::vector<PlotSeries>& series,
                    const PlotOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_svg_plot: cannot open " + path);
  out << render_svg_plot(series, opts);
}

}  // namespace pdp
