#include "plgp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace plgp::experiments {
namespace {

constexpr double kWidth = 720, kHeight = 460;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

struct Scale {
  double lo, hi;
  bool log;
  double px_lo, px_hi;

  double map(double v) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return px_lo + t * (px_hi - px_lo);
  }
  double value_at(double t) const {
    const double v = lo + t * (hi - lo);
    return log ? std::pow(10.0, v) : v;
  }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0); }

Scale make_scale(std::vector<double> values, bool log, double px_lo, double px_hi) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!usable(v, log)) continue;
    const double t = log ? std::log10(v) : v;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-12) {
    const double pad = std::max(std::abs(lo) * 0.05, 0.5);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log, px_lo, px_hi};
}

}  // namespace

std::string svg_plot(const SvgAxes& axes, const std::vector<SvgSeries>& series) {
  std::vector<double> xs, ys(axes.horizontal_lines);
  for (const auto& s : series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const Scale sx = make_scale(xs, axes.log_x, kLeft, kWidth - kRight);
  const Scale sy = make_scale(ys, axes.log_y, kHeight - kBottom, kTop);

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(axes.title) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
    << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double t = i / 5.0;
    const double vx = sx.value_at(t), vy = sy.value_at(t);
    const double px = sx.map(vx), py = sy.map(vy);
    o << "<line x1=\"" << px << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px << "\" y2=\""
      << kHeight - kBottom + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << px << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
      << fmt(vx) << "</text>\n";
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kLeft << "\" y2=\"" << py
      << "\" stroke=\"black\"/>";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << fmt(vy)
      << "</text>\n";
  }
  o << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 15
    << "\" text-anchor=\"middle\">" << escape(axes.x_label) << (axes.log_x ? " (log)" : "")
    << "</text>\n";
  o << "<text transform=\"translate(18," << (kTop + kHeight - kBottom) / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(axes.y_label)
    << (axes.log_y ? " (log)" : "") << "</text>\n";

  for (double level : axes.horizontal_lines) {
    if (!usable(level, axes.log_y)) continue;
    const double py = sy.map(level);
    o << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << py << "\" stroke=\"grey\" stroke-dasharray=\"6,4\"/>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string colour = s.colour.empty() ? kPalette[i % std::size(kPalette)] : s.colour;
    const std::size_t count = std::min(s.x.size(), s.y.size());
    if (s.markers) {
      for (std::size_t j = 0; j < count; ++j) {
        if (!usable(s.x[j], axes.log_x) || !usable(s.y[j], axes.log_y)) continue;
        o << "<circle cx=\"" << sx.map(s.x[j]) << "\" cy=\"" << sy.map(s.y[j])
          << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
      }
    } else {
      o << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colour << "\" points=\"";
      for (std::size_t j = 0; j < count; ++j) {
        if (!usable(s.x[j], axes.log_x) || !usable(s.y[j], axes.log_y)) continue;
        o << sx.map(s.x[j]) << "," << sy.map(s.y[j]) << " ";
      }
      o << "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    o << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << ly - 8 << "\" width=\"14\" height=\"4\" fill=\""
      << colour << "\"/>";
    o << "<text x=\"" << kWidth - kRight + 32 << "\" y=\"" << ly - 2 << "\">" << escape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace plgp::experiments
