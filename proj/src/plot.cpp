#include "holobeam/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include "holobeam/error.hpp"

namespace holobeam {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Point {
  double x, y, ci;
};

using SeriesKey = std::tuple<std::string, double, double>;  // policy, power, distance

}  // namespace

std::string render_svg(const ExperimentResult& result, const PlotOptions& opt) {
  const double left = 70.0, right = 190.0, top = 40.0, bottom = 50.0;
  const double w = opt.width, h = opt.height;
  const double plot_w = w - left - right, plot_h = h - top - bottom;

  std::map<SeriesKey, std::vector<Point>> series;
  for (const auto& c : result.cells) {
    const double y = opt.metric == PlotMetric::error_rate ? c.error_rate : c.mean_rate;
    const double ci = opt.metric == PlotMetric::error_rate ? c.error_ci95 : c.rate_ci95;
    series[{std::string(to_string(c.key.policy)), c.key.power_dbm, c.key.distance_m}].push_back(
        {static_cast<double>(c.key.n), y, ci});
  }
  for (auto& [_, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  }

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& [_, pts] : series) {
    for (const auto& p : pts) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      if (opt.log_y) {
        if (p.y > 0.0) {
          y_lo = std::min(y_lo, p.y);
          y_hi = std::max(y_hi, p.y);
        }
      } else {
        y_lo = std::min(y_lo, p.y - p.ci);
        y_hi = std::max(y_hi, p.y + p.ci);
      }
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
  }
  if (x_hi <= x_lo) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  if (opt.log_y) {
    if (!std::isfinite(y_lo)) {
      y_lo = 1e-3;
      y_hi = 1.0;
    }
    y_lo = std::pow(10.0, std::floor(std::log10(y_lo)));
    y_hi = std::pow(10.0, std::ceil(std::log10(y_hi)));
    if (y_hi <= y_lo) y_lo = y_hi / 10.0;
  } else {
    if (!std::isfinite(y_lo)) {
      y_lo = 0.0;
      y_hi = 1.0;
    }
    y_lo = std::min(0.0, y_lo);
    if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  }

  auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) {
    const double t = opt.log_y ? (std::log10(std::max(y, y_lo)) - std::log10(y_lo)) /
                                     (std::log10(y_hi) - std::log10(y_lo))
                               : (y - y_lo) / (y_hi - y_lo);
    return top + (1.0 - std::clamp(t, 0.0, 1.0)) * plot_h;
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
       "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    s += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" + escape(opt.title) + "</text>\n";
  }
  s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
       num(left + plot_w) + "\" y2=\"" + num(top + plot_h) + "\"/>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
       num(top + plot_h) + "\"/>\n";
  s += "</g>\n";

  s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / 5.0;
    s += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(top + plot_h + 16) +
         "\" text-anchor=\"middle\">" + tick_label(x) + "</text>\n";
  }
  std::vector<double> yticks;
  if (opt.log_y) {
    for (double v = y_lo; v <= y_hi * 1.0000001; v *= 10.0) yticks.push_back(v);
  } else {
    for (int i = 0; i <= 5; ++i) yticks.push_back(y_lo + (y_hi - y_lo) * i / 5.0);
  }
  for (double v : yticks) {
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(sy(v) + 4) +
         "\" text-anchor=\"end\">" + tick_label(v) + "</text>\n";
  }
  const char* y_name = opt.metric == PlotMetric::error_rate ? "error probability"
                                                             : "achievable rate (bit/s/Hz)";
  s += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(h - 12) +
       "\" text-anchor=\"middle\">pilot symbols n</text>\n";
  s += "<text transform=\"translate(16 " + num(top + plot_h / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + y_name + "</text>\n";
  s += "</g>\n";

  std::size_t index = 0;
  for (const auto& [key, pts] : series) {
    const char* color = kPalette[index % std::size(kPalette)];
    std::string poly;
    std::string whiskers;
    for (const auto& p : pts) {
      if (opt.log_y && p.y <= 0.0) continue;
      if (!poly.empty()) poly += ' ';
      poly += num(sx(p.x)) + "," + num(sy(p.y));
      if (p.ci > 0.0) {
        const double x = sx(p.x), y0 = sy(p.y - p.ci), y1 = sy(p.y + p.ci);
        whiskers += "<line x1=\"" + num(x) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x) +
                    "\" y2=\"" + num(y1) + "\"/>";
        whiskers += "<line x1=\"" + num(x - 3) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x + 3) +
                    "\" y2=\"" + num(y0) + "\"/>";
        whiskers += "<line x1=\"" + num(x - 3) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x + 3) +
                    "\" y2=\"" + num(y1) + "\"/>\n";
      }
    }
    s += "<g stroke=\"" + std::string(color) + "\" fill=\"none\" stroke-width=\"1.5\">\n";
    s += "<polyline points=\"" + poly + "\"/>\n" + whiskers;
    s += "</g>\n";
    const auto& [policy, power, distance] = key;
    const double ly = top + 14.0 + 18.0 * static_cast<double>(index);
    s += "<line x1=\"" + num(left + plot_w + 12) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
         num(left + plot_w + 32) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(left + plot_w + 36) + "\" y=\"" + num(ly) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(policy) + " " +
         tick_label(power) + " dBm " + tick_label(distance) + " m</text>\n";
    ++index;
  }
  s += "</svg>\n";
  return s;
}

void emit_svg(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path,
              const PlotOptions& options) {
  const ExperimentResult result = read_results(csv_path);
  std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_error, "cannot write " + svg_path.string());
  out << render_svg(result, options);
}

}  // namespace holobeam
