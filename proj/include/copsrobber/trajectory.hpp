// trajectory.hpp - piecewise-geodesic timed paths on a metric graph.
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "copsrobber/metric_graph.hpp"

namespace copsrobber {

class TrajectoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using GraphPtr = std::shared_ptr<const MetricGraph>;

struct Breakpoint {
  double t = 0.0;
  GraphPoint p;
};

/// Portion of a segment's route lying on one edge.
struct RoutePiece {
  EdgeId edge = 0;
  double from_offset = 0.0;
  double to_offset = 0.0;
  double arc_start = 0.0;  // arc length from the segment start

  [[nodiscard]] double length() const { return std::abs(to_offset - from_offset); }
};

/// Continuous path given by breakpoints; between consecutive breakpoints the
/// motion has constant speed along the recorded route.
class TimedPath {
 public:
  static TimedPath make(GraphPtr graph, std::vector<Breakpoint> breakpoints,
                        std::vector<std::vector<EdgeId>> routes, double speed) {
    TimedPath p;
    p.graph_ = std::move(graph);
    p.bps_ = std::move(breakpoints);
    p.routes_ = std::move(routes);
    p.speed_ = speed;
    p.validate();
    return p;
  }

  [[nodiscard]] const MetricGraph& graph() const { return *graph_; }
  [[nodiscard]] const GraphPtr& graph_ptr() const { return graph_; }
  [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const { return bps_; }
  [[nodiscard]] const std::vector<std::vector<EdgeId>>& routes() const { return routes_; }
  [[nodiscard]] double speed() const { return speed_; }
  [[nodiscard]] double duration() const { return bps_.back().t; }
  [[nodiscard]] std::size_t segment_count() const { return routes_.size(); }
  [[nodiscard]] double segment_length(std::size_t i) const { return lengths_[i]; }
  [[nodiscard]] const std::vector<RoutePiece>& pieces(std::size_t i) const { return pieces_[i]; }

  /// Same geometry with a different declared speed bound.
  [[nodiscard]] TimedPath with_speed(double speed) const {
    return make(graph_, bps_, routes_, speed);
  }

  /// Position after travelling arc length u along segment i.
  [[nodiscard]] GraphPoint position_at_arc(std::size_t i, double u) const {
    const auto& ps = pieces_[i];
    if (ps.empty()) return bps_[i].p;
    for (const auto& piece : ps) {
      if (u <= piece.arc_start + piece.length() || &piece == &ps.back()) {
        const double along = std::clamp(u - piece.arc_start, 0.0, piece.length());
        const double dir = piece.to_offset >= piece.from_offset ? 1.0 : -1.0;
        return {piece.edge, piece.from_offset + dir * along};
      }
    }
    return bps_[i + 1].p;
  }

  /// Index of the segment containing time t (the earlier one at breakpoints).
  [[nodiscard]] std::size_t segment_at(double t) const {
    auto it = std::lower_bound(bps_.begin() + 1, bps_.end(), t,
                               [](const Breakpoint& b, double v) { return b.t < v; });
    const auto idx = static_cast<std::size_t>(it - bps_.begin());
    return std::min(idx, bps_.size() - 1) - 1;
  }

  [[nodiscard]] GraphPoint evaluate(double t) const {
    if (t < -kGeomTol || t > duration() + kGeomTol) {
      throw TrajectoryError("time " + std::to_string(t) + " outside [0, " +
                            std::to_string(duration()) + "]");
    }
    if (routes_.empty()) return bps_.front().p;
    t = std::clamp(t, 0.0, duration());
    const std::size_t i = segment_at(t);
    if (t <= bps_[i].t) return bps_[i].p;
    if (t >= bps_[i + 1].t) return bps_[i + 1].p;
    const double frac = (t - bps_[i].t) / (bps_[i + 1].t - bps_[i].t);
    return position_at_arc(i, frac * lengths_[i]);
  }

  /// Edge intervals covered by the path during [t0, t1].
  [[nodiscard]] std::vector<WalkLeg> swept(double t0, double t1) const {
    std::vector<WalkLeg> out;
    t0 = std::clamp(t0, 0.0, duration());
    t1 = std::clamp(t1, 0.0, duration());
    if (routes_.empty() || t1 <= t0) {
      const GraphPoint p = evaluate(t0);
      out.push_back({p.edge, p.offset, p.offset});
      return out;
    }
    for (std::size_t i = segment_at(t0); i < routes_.size() && bps_[i].t < t1; ++i) {
      const double ta = std::max(t0, bps_[i].t);
      const double tb = std::min(t1, bps_[i + 1].t);
      const double span = bps_[i + 1].t - bps_[i].t;
      const double ua = lengths_[i] * (ta - bps_[i].t) / span;
      const double ub = lengths_[i] * (tb - bps_[i].t) / span;
      if (pieces_[i].empty()) {
        out.push_back({bps_[i].p.edge, bps_[i].p.offset, bps_[i].p.offset});
        continue;
      }
      for (const auto& piece : pieces_[i]) {
        const double lo = std::max(ua, piece.arc_start);
        const double hi = std::min(ub, piece.arc_start + piece.length());
        if (hi < lo) continue;
        const double dir = piece.to_offset >= piece.from_offset ? 1.0 : -1.0;
        out.push_back({piece.edge, piece.from_offset + dir * (lo - piece.arc_start),
                       piece.from_offset + dir * (hi - piece.arc_start)});
      }
    }
    return out;
  }

  /// Breakpoint times and vertex-passing times inside [t0, t1], plus both ends.
  [[nodiscard]] std::vector<double> event_times(double t0, double t1) const {
    std::vector<double> ts{t0, t1};
    if (routes_.empty()) return ts;
    for (std::size_t i = segment_at(t0); i < routes_.size() && bps_[i].t <= t1; ++i) {
      const double span = bps_[i + 1].t - bps_[i].t;
      auto push = [&](double t) {
        if (t >= t0 && t <= t1) ts.push_back(t);
      };
      push(bps_[i].t);
      push(bps_[i + 1].t);
      for (const auto& piece : pieces_[i]) {
        if (lengths_[i] > 0.0) push(bps_[i].t + span * piece.arc_start / lengths_[i]);
      }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
  }

 private:
  void validate() {
    if (!graph_) throw TrajectoryError("trajectory has no graph");
    if (bps_.empty()) throw TrajectoryError("trajectory needs at least one breakpoint");
    if (routes_.size() + 1 != bps_.size()) {
      throw TrajectoryError("expected one route per segment");
    }
    if (!(speed_ >= 0.0) || !std::isfinite(speed_)) {
      throw TrajectoryError("speed bound must be nonnegative");
    }
    if (std::abs(bps_.front().t) > kGeomTol) throw TrajectoryError("trajectory must start at t=0");
    bps_.front().t = 0.0;
    const MetricGraph& g = *graph_;
    for (const auto& b : bps_) {
      if (!g.contains(b.p)) throw TrajectoryError("breakpoint outside the graph");
    }
    pieces_.assign(routes_.size(), {});
    lengths_.assign(routes_.size(), 0.0);
    for (std::size_t i = 0; i < routes_.size(); ++i) {
      if (!(bps_[i + 1].t > bps_[i].t)) {
        throw TrajectoryError("breakpoint times must be strictly increasing");
      }
      build_pieces(i);
      const double dt = bps_[i + 1].t - bps_[i].t;
      if (lengths_[i] > speed_ * dt * (1.0 + 1e-9) + kGeomTol) {
        throw TrajectoryError("segment " + std::to_string(i) + " exceeds the speed bound");
      }
    }
  }

  void build_pieces(std::size_t i) {
    const MetricGraph& g = *graph_;
    const auto& route = routes_[i];
    const GraphPoint& a = bps_[i].p;
    const GraphPoint& b = bps_[i + 1].p;
    auto& ps = pieces_[i];
    if (route.empty()) {
      if (!same_point(g, a, b)) throw TrajectoryError("empty route between distinct points");
      return;
    }
    for (EdgeId e : route) {
      if (e >= g.edge_count()) throw TrajectoryError("route references an unknown edge");
    }
    const auto start = g.offset_on(a, route.front());
    const auto end = g.offset_on(b, route.back());
    if (!start || !end) throw TrajectoryError("route does not connect its breakpoints");
    double arc = 0.0;
    auto add = [&](EdgeId e, double from, double to) {
      ps.push_back({e, from, to, arc});
      arc += std::abs(to - from);
    };
    if (route.size() == 1) {
      add(route[0], *start, *end);
    } else {
      double entry = *start;
      for (std::size_t j = 0; j + 1 < route.size(); ++j) {
        if (route[j] == route[j + 1]) throw TrajectoryError("route repeats an edge consecutively");
        const auto v = g.shared_vertex(route[j], route[j + 1]);
        if (!v) throw TrajectoryError("route edges are not adjacent");
        add(route[j], entry, g.vertex_offset(route[j], *v));
        entry = g.vertex_offset(route[j + 1], *v);
      }
      add(route.back(), entry, *end);
    }
    lengths_[i] = arc;
  }

  GraphPtr graph_;
  std::vector<Breakpoint> bps_;
  std::vector<std::vector<EdgeId>> routes_;
  double speed_ = 0.0;
  std::vector<std::vector<RoutePiece>> pieces_;
  std::vector<double> lengths_;
};

/// Incremental construction of a path moving at a fixed speed.
class PathBuilder {
 public:
  PathBuilder(GraphPtr graph, GraphPoint start, double speed)
      : graph_(std::move(graph)), speed_(speed) {
    require_point(*graph_, start);
    if (!(speed > 0.0)) throw TrajectoryError("builder speed must be positive");
    bps_.push_back({0.0, start});
  }

  [[nodiscard]] double now() const { return bps_.back().t; }
  [[nodiscard]] const GraphPoint& position() const { return bps_.back().p; }
  [[nodiscard]] const MetricGraph& graph() const { return *graph_; }
  [[nodiscard]] double speed() const { return speed_; }

  /// Shortest route to target at full speed.
  PathBuilder& go_to(const GraphPoint& target) {
    Route r = shortest_route(*graph_, position(), target);
    return travel(std::move(r.edges), r.length, target);
  }

  /// Straight move along edge e, which must contain the current position.
  PathBuilder& go_along(EdgeId e, double offset) {
    const auto from = graph_->offset_on(position(), e);
    if (!from) throw TrajectoryError("current position is not on the requested edge");
    return travel({e}, std::abs(offset - *from), GraphPoint{e, offset});
  }

  PathBuilder& wait(double duration) {
    if (duration > 0.0) append(now() + duration, position(), {});
    return *this;
  }

  /// Waits shorter than the relative time resolution are dropped.
  PathBuilder& wait_until(double t) {
    if (t > now() + 1e-12 * std::max(1.0, std::abs(t))) append(t, position(), {});
    return *this;
  }

  PathBuilder& follow(const Walk& walk) {
    for (const auto& leg : walk.legs) go_along(leg.edge, leg.to_offset);
    return *this;
  }

  [[nodiscard]] TimedPath build() const {
    return TimedPath::make(graph_, bps_, routes_, speed_);
  }

 private:
  PathBuilder& travel(std::vector<EdgeId> route, double length, const GraphPoint& target) {
    if (length <= 0.0 || route.empty()) return *this;
    append(now() + length / speed_, target, std::move(route));
    return *this;
  }

  void append(double t, const GraphPoint& p, std::vector<EdgeId> route) {
    if (!(t > now())) return;  // below time resolution
    bps_.push_back({t, p});
    routes_.push_back(std::move(route));
  }

  GraphPtr graph_;
  double speed_;
  std::vector<Breakpoint> bps_;
  std::vector<std::vector<EdgeId>> routes_;
};

// ---------------------------------------------------------------------------
// Speed, variation and reparameterization

inline bool check_lipschitz(const TimedPath& p, double s) {
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const double dt = p.breakpoints()[i + 1].t - p.breakpoints()[i].t;
    if (p.segment_length(i) / dt > s + 1e-9) return false;
  }
  return true;
}

inline double total_variation(const TimedPath& p) {
  double v = 0.0;
  for (std::size_t i = 0; i < p.segment_count(); ++i) v += p.segment_length(i);
  return v;
}

/// Cumulative variation at each breakpoint; linear in between.
struct VariationProfile {
  std::vector<double> times;
  std::vector<double> values;

  [[nodiscard]] double total() const { return values.back(); }
  [[nodiscard]] double at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return values.front();
    if (it == times.end()) return values.back();
    const auto i = static_cast<std::size_t>(it - times.begin()) - 1;
    const double frac = (t - times[i]) / (times[i + 1] - times[i]);
    return values[i] + frac * (values[i + 1] - values[i]);
  }
};

inline VariationProfile variation_profile(const TimedPath& p) {
  VariationProfile prof;
  double acc = 0.0;
  prof.times.push_back(0.0);
  prof.values.push_back(0.0);
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    acc += p.segment_length(i);
    prof.times.push_back(p.breakpoints()[i + 1].t);
    prof.values.push_back(acc);
  }
  return prof;
}

/// Holds the position of breakpoint i for `pause` time units, delaying the rest.
inline TimedPath insert_pause(const TimedPath& p, std::size_t i, double pause) {
  if (i >= p.breakpoints().size()) throw TrajectoryError("pause index out of range");
  if (!(pause > 0.0)) throw TrajectoryError("pause must be positive");
  std::vector<Breakpoint> bps;
  std::vector<std::vector<EdgeId>> routes;
  for (std::size_t k = 0; k < p.breakpoints().size(); ++k) {
    Breakpoint b = p.breakpoints()[k];
    if (k > i) b.t += pause;
    bps.push_back(b);
    if (k < p.segment_count()) routes.push_back(p.routes()[k]);
    if (k == i) {
      bps.push_back({b.t + pause, b.p});
      routes.insert(routes.end() - (k < p.segment_count() ? 1 : 0), std::vector<EdgeId>{});
    }
  }
  return TimedPath::make(p.graph_ptr(), std::move(bps), std::move(routes), p.speed());
}

/// Runs the same geometric path at constant speed s, collapsing idle stretches;
/// the result lives on [0, V/s].
inline TimedPath reparameterize_max_speed(const TimedPath& p, double s) {
  if (!(s > 0.0)) throw TrajectoryError("reparameterization speed must be positive");
  if (!check_lipschitz(p, s)) throw TrajectoryError("path is not s-Lipschitz");
  std::vector<Breakpoint> bps{{0.0, p.breakpoints().front().p}};
  std::vector<std::vector<EdgeId>> routes;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const double len = p.segment_length(i);
    if (len <= kGeomTol) continue;
    acc += len;
    const double t = acc / s;
    if (!(t > bps.back().t)) continue;
    bps.push_back({t, p.breakpoints()[i + 1].p});
    routes.push_back(p.routes()[i]);
  }
  return TimedPath::make(p.graph_ptr(), std::move(bps), std::move(routes), s);
}

// ---------------------------------------------------------------------------
// Strategy transfer maps

/// f'(t) = (e, c x) where (e, x) = f(t / c), on the graph scaled by c.
inline TimedPath transfer_scale(const TimedPath& p, double c) {
  auto scaled = std::make_shared<const MetricGraph>(scale(p.graph(), c));
  std::vector<Breakpoint> bps = p.breakpoints();
  for (auto& b : bps) {
    b.t *= c;
    b.p.offset *= c;
  }
  return TimedPath::make(std::move(scaled), std::move(bps), p.routes(), p.speed());
}

/// Projects the path onto the graph whose leaf edge e is shortened to new_length:
/// positions beyond the new leaf are clamped to it.
inline TimedPath transfer_shorten(const TimedPath& p, EdgeId e, double new_length) {
  const MetricGraph& g = p.graph();
  auto shortened = std::make_shared<const MetricGraph>(shorten_leaf_edge(g, e, new_length));
  const double full = g.edge(e).length;
  const bool leaf_is_to = *leaf_end(g, e) == g.edge(e).to;
  // Distance from the inner vertex, and the projection in edge coordinates.
  auto inner_distance = [&](double x) { return leaf_is_to ? x : full - x; };
  auto project = [&](const GraphPoint& q) -> GraphPoint {
    if (q.edge != e) return q;
    return leaf_is_to ? GraphPoint{e, std::min(q.offset, new_length)}
                      : GraphPoint{e, std::max(0.0, q.offset - (full - new_length))};
  };
  auto clamped = [&](const RoutePiece& piece, double lo, double hi) {
    // true when the arc window [lo, hi] of this piece lies beyond the cut
    const double mid = 0.5 * (lo + hi) - piece.arc_start;
    const double dir = piece.to_offset >= piece.from_offset ? 1.0 : -1.0;
    return inner_distance(piece.from_offset + dir * mid) > new_length + kGeomTol;
  };

  std::vector<Breakpoint> bps{{0.0, project(p.breakpoints().front().p)}};
  std::vector<std::vector<EdgeId>> routes;
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const auto& pieces = p.pieces(i);
    const double t0 = p.breakpoints()[i].t;
    const double t1 = p.breakpoints()[i + 1].t;
    const double len = p.segment_length(i);
    if (pieces.empty() || len <= 0.0) {
      bps.push_back({t1, project(p.breakpoints()[i + 1].p)});
      routes.emplace_back();
      continue;
    }
    // Split arcs where the motion on e crosses the cut.
    std::vector<double> cuts{0.0};
    for (const auto& piece : pieces) {
      if (piece.edge != e || piece.length() <= 0.0) continue;
      const double ra = inner_distance(piece.from_offset);
      const double rb = inner_distance(piece.to_offset);
      if ((ra - new_length) * (rb - new_length) < 0.0) {
        const double u = piece.arc_start + (new_length - ra) / (rb - ra) * piece.length();
        if (u > cuts.back() + kGeomTol && u < len - kGeomTol) cuts.push_back(u);
      }
    }
    cuts.push_back(len);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c];
      const double hi = cuts[c + 1];
      const double t = t0 + (t1 - t0) * hi / len;
      std::vector<EdgeId> route;
      bool moves = false;
      for (const auto& piece : pieces) {
        const double plo = std::max(lo, piece.arc_start);
        const double phi = std::min(hi, piece.arc_start + piece.length());
        if (phi - plo <= 0.0) continue;
        if (piece.edge == e && clamped(piece, plo, phi)) continue;
        moves = true;
        if (route.empty() || route.back() != piece.edge) route.push_back(piece.edge);
      }
      const GraphPoint end = project(c + 2 == cuts.size() ? p.breakpoints()[i + 1].p
                                                          : p.position_at_arc(i, hi));
      if (!moves) route.clear();
      if (!(t > bps.back().t)) continue;
      if (route.empty() && !same_point(*shortened, bps.back().p, end)) {
        route.push_back(e);  // sub-tolerance drift on e at the cut
      }
      bps.push_back({t, end});
      routes.push_back(std::move(route));
    }
  }
  return TimedPath::make(std::move(shortened), std::move(bps), std::move(routes), p.speed());
}

}  // namespace copsrobber
