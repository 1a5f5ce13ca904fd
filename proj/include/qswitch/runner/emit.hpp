#pragma once

// CSV and SVG writers for sweep output. Both are byte-deterministic for a
// given input.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qswitch/runner/sweep.hpp"

namespace qswitch::runner {

// 12 significant digits, trailing zeros kept; -0 prints as 0.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw std::domain_error("cannot format non-finite value");
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

inline void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows to write");
  const auto& head = rows.front().fields;
  for (const auto& row : rows) {
    bool same = row.fields.size() == head.size();
    for (std::size_t i = 0; same && i < head.size(); ++i) same = row.fields[i].first == head[i].first;
    if (!same) throw std::invalid_argument("emit_csv: rows have differing columns");
  }

  std::string text;
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (i) text += ',';
    text += head[i].first;
  }
  text += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.fields.size(); ++i) {
      if (i) text += ',';
      text += format_cell(row.fields[i].second);
    }
    text += '\n';
  }

  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw std::runtime_error("emit_csv: write failed");
}

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  emit_csv(rows, os);
  return os.str();
}

enum class LineStyle { solid, dashed };

struct SvgSeries {
  std::string column;
  LineStyle style = LineStyle::solid;
};

namespace detail {

inline std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct Ticks {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.2;
};

// Round the data span out to 1-2-5 multiples with about `target` intervals.
inline Ticks nice_ticks(double lo, double hi, int target = 5) {
  if (hi - lo <= 0.0) {
    const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  const double step = (frac <= 1.0 ? 1.0 : frac <= 2.0 ? 2.0 : frac <= 5.0 ? 5.0 : 10.0) * mag;
  return {std::floor(lo / step + 1e-9) * step, std::ceil(hi / step - 1e-9) * step, step};
}

inline std::string tick_label(double v, double step) {
  if (std::abs(v) < 1e-12 * step) v = 0.0;
  const int decimals = std::max(0, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
  char spec[16];
  std::snprintf(spec, sizeof spec, "%%.%df", decimals);
  return fmt(v, spec);
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

inline void emit_svg(const std::vector<SweepRow>& rows, std::string_view x_column,
                     const std::vector<SvgSeries>& series, std::ostream& out) {
  if (rows.size() < 2) throw std::invalid_argument("emit_svg: need at least 2 rows");
  if (series.empty()) throw std::invalid_argument("emit_svg: no y columns");

  constexpr double width = 800, height = 600;
  constexpr double left = 80, right = 190, top = 40, bottom = 60;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                      "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  std::vector<double> xs;
  for (const auto& row : rows) xs.push_back(row.number(x_column));
  std::vector<std::vector<double>> ys;
  for (const auto& s : series) {
    std::vector<double> col;
    for (const auto& row : rows) col.push_back(row.number(s.column));
    ys.push_back(std::move(col));
  }

  auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  double ymin = ys.front().front(), ymax = ymin;
  for (const auto& col : ys)
    for (double v : col) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  const detail::Ticks tx = detail::nice_ticks(*xmin_it, *xmax_it);
  const detail::Ticks ty = detail::nice_ticks(ymin, ymax);

  auto px = [&](double x) { return left + (x - tx.lo) / (tx.hi - tx.lo) * plot_w; };
  auto py = [&](double y) { return top + plot_h - (y - ty.lo) / (ty.hi - ty.lo) * plot_h; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
    << "<g font-family=\"sans-serif\" font-size=\"12\">\n";

  // axes
  s << "<line x1=\"" << detail::fmt(left) << "\" y1=\"" << detail::fmt(top + plot_h) << "\" x2=\""
    << detail::fmt(left + plot_w) << "\" y2=\"" << detail::fmt(top + plot_h) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << detail::fmt(left) << "\" y1=\"" << detail::fmt(top) << "\" x2=\"" << detail::fmt(left)
    << "\" y2=\"" << detail::fmt(top + plot_h) << "\" stroke=\"black\"/>\n";

  const auto nx = static_cast<int>(std::lround((tx.hi - tx.lo) / tx.step));
  for (int i = 0; i <= nx; ++i) {
    const double v = tx.lo + i * tx.step;
    const double X = px(v);
    s << "<line x1=\"" << detail::fmt(X) << "\" y1=\"" << detail::fmt(top + plot_h) << "\" x2=\"" << detail::fmt(X)
      << "\" y2=\"" << detail::fmt(top + plot_h + 5) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << detail::fmt(X) << "\" y=\"" << detail::fmt(top + plot_h + 20)
      << "\" text-anchor=\"middle\">" << detail::tick_label(v, tx.step) << "</text>\n";
  }
  const auto ny = static_cast<int>(std::lround((ty.hi - ty.lo) / ty.step));
  for (int i = 0; i <= ny; ++i) {
    const double v = ty.lo + i * ty.step;
    const double Y = py(v);
    s << "<line x1=\"" << detail::fmt(left - 5) << "\" y1=\"" << detail::fmt(Y) << "\" x2=\"" << detail::fmt(left)
      << "\" y2=\"" << detail::fmt(Y) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << detail::fmt(left - 8) << "\" y=\"" << detail::fmt(Y + 4) << "\" text-anchor=\"end\">"
      << detail::tick_label(v, ty.step) << "</text>\n";
  }
  s << "<text x=\"" << detail::fmt(left + plot_w / 2) << "\" y=\"" << detail::fmt(height - 15)
    << "\" text-anchor=\"middle\">" << detail::escape(x_column) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = palette[k % palette.size()];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (series[k].style == LineStyle::dashed) s << " stroke-dasharray=\"6,4\"";
    s << " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s << ' ';
      s << detail::fmt(px(xs[i])) << ',' << detail::fmt(py(ys[k][i]));
    }
    s << "\"/>\n";
  }

  // legend
  const double lx = left + plot_w + 20;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double ly = top + 10 + 20.0 * static_cast<double>(k);
    s << "<line x1=\"" << detail::fmt(lx) << "\" y1=\"" << detail::fmt(ly) << "\" x2=\"" << detail::fmt(lx + 30)
      << "\" y2=\"" << detail::fmt(ly) << "\" stroke=\"" << palette[k % palette.size()] << "\" stroke-width=\"2\"";
    if (series[k].style == LineStyle::dashed) s << " stroke-dasharray=\"6,4\"";
    s << "/>\n";
    s << "<text x=\"" << detail::fmt(lx + 38) << "\" y=\"" << detail::fmt(ly + 4) << "\">"
      << detail::escape(series[k].column) << "</text>\n";
  }
  s << "</g>\n</svg>\n";

  const std::string text = s.str();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw std::runtime_error("emit_svg: write failed");
}

// Convenience overload: every y column drawn solid.
inline void emit_svg(const std::vector<SweepRow>& rows, std::string_view x_column,
                     const std::vector<std::string>& y_columns, std::ostream& out) {
  std::vector<SvgSeries> series;
  for (const auto& c : y_columns) series.push_back({c, LineStyle::solid});
  emit_svg(rows, x_column, series, out);
}

}  // namespace qswitch::runner
