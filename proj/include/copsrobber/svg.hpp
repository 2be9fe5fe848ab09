// svg.hpp - static time-space diagram: edges laid side by side on the x axis,
// time running down the y axis.
#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "copsrobber/trajectory.hpp"

namespace copsrobber {

struct SvgOptions {
  double width = 900.0;
  double height = 600.0;
  double margin = 40.0;
  double gap = 12.0;  // pixels between edge columns
  std::optional<double> eps;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct SvgFrame {
  std::vector<double> column_x;  // left pixel of each edge column
  double x_scale = 1.0;          // pixels per length unit
  double y_scale = 1.0;          // pixels per time unit
  double margin = 0.0;

  [[nodiscard]] double x(EdgeId e, double offset) const { return column_x[e] + offset * x_scale; }
  [[nodiscard]] double y(double t) const { return margin + t * y_scale; }
};

/// Polyline pieces of a path, one per (segment, edge piece).
inline void svg_trace(std::ostringstream& os, const TimedPath& p, const SvgFrame& f,
                      const std::string& style) {
  const auto& bps = p.breakpoints();
  auto line = [&](EdgeId e, double x0, double t0, double x1, double t1) {
    os << "<line x1=\"" << svg_num(f.x(e, x0)) << "\" y1=\"" << svg_num(f.y(t0)) << "\" x2=\""
       << svg_num(f.x(e, x1)) << "\" y2=\"" << svg_num(f.y(t1)) << "\" " << style << "/>\n";
  };
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const double ta = bps[i].t;
    const double tb = bps[i + 1].t;
    const double len = p.segment_length(i);
    if (p.pieces(i).empty() || len <= 0.0) {
      line(bps[i].p.edge, bps[i].p.offset, ta, bps[i].p.offset, tb);
      continue;
    }
    for (const auto& piece : p.pieces(i)) {
      const double t0 = ta + (tb - ta) * piece.arc_start / len;
      const double t1 = ta + (tb - ta) * (piece.arc_start + piece.length()) / len;
      line(piece.edge, piece.from_offset, t0, piece.to_offset, t1);
    }
  }
}

}  // namespace detail

inline std::string export_svg(const TimedPath& cop, const std::optional<TimedPath>& witness = {},
                              const SvgOptions& opt = {}) {
  const MetricGraph& g = cop.graph();
  if (cop.segment_count() == 0) throw TrajectoryError("cannot draw an empty strategy");
  detail::SvgFrame f;
  f.margin = opt.margin;
  const double usable =
      opt.width - 2.0 * opt.margin - opt.gap * static_cast<double>(g.edge_count() - 1);
  f.x_scale = usable / g.total_length();
  double duration = cop.duration();
  if (witness) duration = std::max(duration, witness->duration());
  f.y_scale = (opt.height - 2.0 * opt.margin) / duration;
  double x = opt.margin;
  for (const auto& e : g.edges()) {
    f.column_x.push_back(x);
    x += e.length * f.x_scale + opt.gap;
  }
  using detail::svg_num;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(opt.width)
     << "\" height=\"" << svg_num(opt.height) << "\" viewBox=\"0 0 " << svg_num(opt.width) << ' '
     << svg_num(opt.height) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    const double x0 = f.x(id, 0.0);
    const double x1 = x0 + e.length * f.x_scale;
    os << "<rect x=\"" << svg_num(x0) << "\" y=\"" << svg_num(f.y(0.0)) << "\" width=\""
       << svg_num(x1 - x0) << "\" height=\"" << svg_num(f.y(duration) - f.y(0.0))
       << "\" fill=\"#f4f4f4\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    os << "<text x=\"" << svg_num(0.5 * (x0 + x1)) << "\" y=\"" << svg_num(opt.margin - 8.0)
       << "\" font-size=\"10\" text-anchor=\"middle\">" << e.id << "</text>\n";
    os << "<text x=\"" << svg_num(x0) << "\" y=\"" << svg_num(f.y(duration) + 12.0)
       << "\" font-size=\"8\">" << g.vertex_name(e.from) << "</text>\n";
    os << "<text x=\"" << svg_num(x1) << "\" y=\"" << svg_num(f.y(duration) + 12.0)
       << "\" font-size=\"8\" text-anchor=\"end\">" << g.vertex_name(e.to) << "</text>\n";
  }
  if (opt.eps) {
    detail::svg_trace(os, cop, f,
                      "stroke=\"#e08080\" stroke-opacity=\"0.35\" stroke-linecap=\"round\" "
                      "stroke-width=\"" +
                          svg_num(2.0 * *opt.eps * f.x_scale) + "\"");
  }
  detail::svg_trace(os, cop, f, "stroke=\"#b00000\" stroke-width=\"1.2\"");
  if (witness) detail::svg_trace(os, *witness, f, "stroke=\"#0050b0\" stroke-width=\"1.2\"");
  os << "<text x=\"" << svg_num(opt.margin) << "\" y=\"" << svg_num(opt.height - 8.0)
     << "\" font-size=\"10\">time 0 to " << svg_num(duration) << " (down)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace copsrobber
