#include "sygr/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace sygr {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 190;  // legend column
constexpr double kTop = 40;
constexpr double kBottom = 60;

// Light gray to dark gray, then orange for the fourth series (the combined
// estimate in the usual three-cohorts-plus-combined layout).
constexpr std::array<const char*, 8> kPalette = {"#bdbdbd", "#858585", "#3f3f3f", "#e6820e",
                                                 "#1f77b4", "#2ca02c", "#9467bd", "#d62728"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_kde_svg(std::span<const PlotSeries> series, const std::string& title) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double y_max = 0.0;
  for (const auto& s : series) {
    for (const auto& p : s.curve) y_max = std::max(y_max, p.density);
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  const auto sx = [&](double rate) { return kLeft + rate * plot_w; };
  const auto sy = [&](double d) { return kTop + plot_h - d / y_max * plot_h; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" " +
           "font-family=\"sans-serif\" font-size=\"15\">" + escape(title) + "</text>\n";
  }

  // Axes and ticks.
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + plot_h) + "\" x2=\"" +
         num(kLeft + plot_w) + "\" y2=\"" + num(kTop + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(kTop + plot_h) + "\"/>\n";
  for (int t = 0; t <= 100; t += 10) {
    const double x = sx(t / 100.0);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + plot_h) + "\" x2=\"" + num(x) +
           "\" y2=\"" + num(kTop + plot_h + 5) + "\"/>\n";
  }
  svg += "</g>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n";
  for (int t = 0; t <= 100; t += 10) {
    svg += "<text x=\"" + num(sx(t / 100.0)) + "\" y=\"" + num(kTop + plot_h + 20) + "\">" +
           std::to_string(t) + "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 15) +
         "\">Six-year graduation rate (%)</text>\n";
  svg += "<text x=\"18\" y=\"" + num(kTop + plot_h / 2) + "\" transform=\"rotate(-90 18 " +
         num(kTop + plot_h / 2) + ")\">Density</text>\n";
  svg += "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % kPalette.size()];
    if (s.point_mass) {
      const double x = sx(std::clamp(*s.point_mass, 0.0, 1.0));
      svg += "<line class=\"point-mass\" x1=\"" + num(x) + "\" y1=\"" + num(kTop) + "\" x2=\"" +
             num(x) + "\" y2=\"" + num(kTop + plot_h) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\" stroke-dasharray=\"6 3\"/>\n";
    } else {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"2\" points=\"";
      for (std::size_t j = 0; j < s.curve.size(); ++j) {
        if (j > 0) svg += ' ';
        svg += num(sx(s.curve[j].x)) + "," + num(sy(s.curve[j].density));
      }
      svg += "\"/>\n";
    }
    const double ly = kTop + 10 + 22.0 * static_cast<double>(i);
    const double lx = kLeft + plot_w + 20;
    svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 24) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"3\"" +
           (s.point_mass ? " stroke-dasharray=\"6 3\"" : "") + "/>\n";
    svg += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sygr
