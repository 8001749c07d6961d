#include "sage/chart.hpp"

#include "sage/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sage {

namespace {

constexpr double kWidth = 720.0;
constexpr double kLeft = 170.0;
constexpr double kRight = 40.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
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
      default: out += c;
    }
  }
  return out;
}

std::string header(double height, const std::string& title) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(height)
    << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << num(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
    << "</text>\n";
  return o.str();
}

struct Range {
  double lo;
  double hi;
  double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double c = lo;
    lo = c - 1.0;
    hi = c + 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

void axis_ticks_x(std::ostringstream& o, const Range& r, double y, double x0, double x1, bool log_x) {
  for (int k = 0; k <= 4; ++k) {
    const double v = r.lo + (r.hi - r.lo) * k / 4.0;
    const double x = r.map(v, x0, x1);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x) << "\" y2=\"" << num(y + 5)
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(x) << "\" y=\"" << num(y + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
      << label(log_x ? std::pow(10.0, v) : v) << "</text>\n";
  }
}

void axis_ticks_y(std::ostringstream& o, const Range& r, double x, double y0, double y1) {
  for (int k = 0; k <= 4; ++k) {
    const double v = r.lo + (r.hi - r.lo) * k / 4.0;
    const double y = r.map(v, y0, y1);
    o << "<line x1=\"" << num(x - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x) << "\" y2=\"" << num(y)
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(x - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
      << label(v) << "</text>\n";
  }
}

}  // namespace

std::pair<double, double> whisker(const ChartBar& bar, double multiplier) {
  return {bar.value - multiplier * bar.std_error, bar.value + multiplier * bar.std_error};
}

std::string render_bar_chart(const ChartSpec& spec) {
  if (spec.bars.empty()) throw Error("chart needs at least one bar");
  std::vector<ChartBar> bars = spec.bars;
  std::stable_sort(bars.begin(), bars.end(), [](const ChartBar& a, const ChartBar& b) { return a.value > b.value; });

  double lo = 0.0, hi = 0.0;
  for (const auto& b : bars) {
    const auto [l, h] = whisker(b, spec.confidence_multiplier);
    lo = std::min({lo, l, b.value});
    hi = std::max({hi, h, b.value});
  }
  const Range r = padded(lo, hi);
  const double row = 28.0;
  const double height = kTop + kBottom + row * static_cast<double>(bars.size());
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double zero = r.map(0.0, x0, x1);

  std::ostringstream o;
  o << header(height, spec.title);
  for (std::size_t k = 0; k < bars.size(); ++k) {
    const auto& b = bars[k];
    const double y = kTop + row * static_cast<double>(k);
    const double xv = r.map(b.value, x0, x1);
    const auto [wl, wh] = whisker(b, spec.confidence_multiplier);
    const double mid = y + row / 2;
    o << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(mid + 4) << "\" text-anchor=\"end\" font-size=\"12\">"
      << escape(b.name) << "</text>\n"
      << "<rect x=\"" << num(std::min(zero, xv)) << "\" y=\"" << num(y + 4) << "\" width=\""
      << num(std::abs(xv - zero)) << "\" height=\"" << num(row - 8) << "\" fill=\"" << kPalette[0] << "\"/>\n"
      << "<line class=\"whisker\" data-lo=\"" << label(wl) << "\" data-hi=\"" << label(wh) << "\" x1=\""
      << num(r.map(wl, x0, x1)) << "\" y1=\"" << num(mid) << "\" x2=\"" << num(r.map(wh, x0, x1)) << "\" y2=\""
      << num(mid) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  const double axis_y = kTop + row * static_cast<double>(bars.size());
  o << "<line x1=\"" << num(zero) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(zero) << "\" y2=\"" << num(axis_y)
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << num(x0) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(axis_y)
    << "\" stroke=\"black\"/>\n";
  axis_ticks_x(o, r, axis_y, x0, x1, false);
  char ci[64];
  std::snprintf(ci, sizeof ci, " (error bars: +/- %.3g stderr)", spec.confidence_multiplier);
  o << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(height - 12) << "\" text-anchor=\"middle\" font-size=\"12\">"
    << escape(spec.value_label) << ci << "</text>\n</svg>\n";
  return o.str();
}

void emit_chart(const ChartSpec& spec, const std::filesystem::path& path) {
  write_text(render_bar_chart(spec), path);
}

std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<Series>& series, bool log_x) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  const auto tx = [&](double x) { return log_x ? std::log10(std::max(x, 1e-300)) : x; };
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xlo = std::min(xlo, tx(x));
      xhi = std::max(xhi, tx(x));
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  if (!std::isfinite(xlo)) xlo = xhi = ylo = yhi = 0.0;
  const Range rx = padded(xlo, xhi), ry = padded(ylo, yhi);
  const double height = 420.0;
  const double x0 = 80.0, x1 = kWidth - kRight, y0 = height - kBottom, y1 = kTop;

  std::ostringstream o;
  o << header(height, title);
  o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y0)
    << "\" stroke=\"black\"/>\n<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
    << "\" y2=\"" << num(y1) << "\" stroke=\"black\"/>\n";
  axis_ticks_x(o, rx, y0, x0, x1, log_x);
  axis_ticks_y(o, ry, x0, y0, y1);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t p = 0; p < series[k].points.size(); ++p) {
      const auto& [x, y] = series[k].points[p];
      o << (p ? " " : "") << num(rx.map(tx(x), x0, x1)) << ',' << num(ry.map(y, y0, y1));
    }
    o << "\"/>\n<text x=\"" << num(x1 - 150) << "\" y=\"" << num(y1 + 16 * static_cast<double>(k + 1))
      << "\" font-size=\"12\" fill=\"" << color << "\">" << escape(series[k].name) << "</text>\n";
  }
  o << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(height - 14) << "\" text-anchor=\"middle\" font-size=\"12\">"
    << escape(x_label) << "</text>\n<text x=\"16\" y=\"" << num((y0 + y1) / 2)
    << "\" font-size=\"12\" transform=\"rotate(-90 16 " << num((y0 + y1) / 2) << ")\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n</svg>\n";
  return o.str();
}

std::string render_scatter(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<std::pair<double, double>>& points) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& [x, y] : points) {
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  if (points.empty()) xlo = xhi = ylo = yhi = 0.0;
  const Range rx = padded(xlo, xhi), ry = padded(ylo, yhi);
  const double height = 420.0;
  const double x0 = 80.0, x1 = kWidth - kRight, y0 = height - kBottom, y1 = kTop;
  std::ostringstream o;
  o << header(height, title);
  o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y0)
    << "\" stroke=\"black\"/>\n<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
    << "\" y2=\"" << num(y1) << "\" stroke=\"black\"/>\n";
  axis_ticks_x(o, rx, y0, x0, x1, false);
  axis_ticks_y(o, ry, x0, y0, y1);
  for (const auto& [x, y] : points)
    o << "<circle cx=\"" << num(rx.map(x, x0, x1)) << "\" cy=\"" << num(ry.map(y, y0, y1))
      << "\" r=\"2.5\" fill=\"" << kPalette[0] << "\" fill-opacity=\"0.6\"/>\n";
  o << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(height - 14) << "\" text-anchor=\"middle\" font-size=\"12\">"
    << escape(x_label) << "</text>\n<text x=\"16\" y=\"" << num((y0 + y1) / 2)
    << "\" font-size=\"12\" transform=\"rotate(-90 16 " << num((y0 + y1) / 2) << ")\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n</svg>\n";
  return o.str();
}

std::string render_grouped_bars(const std::string& title, const std::vector<std::string>& categories,
                                const std::vector<BarGroupSeries>& series, double multiplier) {
  if (categories.empty() || series.empty()) throw Error("grouped chart needs categories and series");
  double lo = 0.0, hi = 0.0;
  for (const auto& s : series) {
    if (s.values.size() != categories.size()) throw Error("grouped chart: series length mismatch");
    for (std::size_t c = 0; c < s.values.size(); ++c) {
      const double e = c < s.std_errors.size() ? multiplier * s.std_errors[c] : 0.0;
      lo = std::min(lo, s.values[c] - e);
      hi = std::max(hi, s.values[c] + e);
    }
  }
  const Range r = padded(lo, hi);
  const double bar = 14.0;
  const double group = bar * static_cast<double>(series.size()) + 12.0;
  const double height = kTop + kBottom + group * static_cast<double>(categories.size()) + 16.0 * static_cast<double>(series.size());
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double zero = r.map(0.0, x0, x1);
  std::ostringstream o;
  o << header(height, title);
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gy = kTop + group * static_cast<double>(c);
    o << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(gy + group / 2) << "\" text-anchor=\"end\" font-size=\"12\">"
      << escape(categories[c]) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double y = gy + bar * static_cast<double>(s);
      const double v = series[s].values[c];
      const double xv = r.map(v, x0, x1);
      o << "<rect x=\"" << num(std::min(zero, xv)) << "\" y=\"" << num(y) << "\" width=\"" << num(std::abs(xv - zero))
        << "\" height=\"" << num(bar - 2) << "\" fill=\"" << kPalette[s % std::size(kPalette)] << "\"/>\n";
      if (c < series[s].std_errors.size()) {
        const double e = multiplier * series[s].std_errors[c];
        o << "<line class=\"whisker\" x1=\"" << num(r.map(v - e, x0, x1)) << "\" y1=\"" << num(y + bar / 2 - 1) << "\" x2=\""
          << num(r.map(v + e, x0, x1)) << "\" y2=\"" << num(y + bar / 2 - 1) << "\" stroke=\"black\"/>\n";
      }
    }
  }
  const double axis_y = kTop + group * static_cast<double>(categories.size());
  o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(axis_y)
    << "\" stroke=\"black\"/>\n";
  axis_ticks_x(o, r, axis_y, x0, x1, false);
  for (std::size_t s = 0; s < series.size(); ++s)
    o << "<text x=\"" << num(x0) << "\" y=\"" << num(axis_y + 36 + 16 * static_cast<double>(s)) << "\" font-size=\"12\" fill=\""
      << kPalette[s % std::size(kPalette)] << "\">" << escape(series[s].name) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace sage
