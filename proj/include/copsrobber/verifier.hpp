// verifier.hpp - discretized reachability check of a cop path against every
// speed-1 robber, with survival witnesses and an enumeration oracle.
//
// A robber path is snapped to its nearest sample at each grid time, so the
// sampled robber moves at most dt + sigma per step (sigma = max spacing) and
// stays farther than eps - dt - sigma/2 from everything the cop sweeps during
// the step. An empty sampled avoid set therefore proves eps-capture.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "copsrobber/metric_graph.hpp"
#include "copsrobber/trajectory.hpp"

namespace copsrobber {

class VerifierError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comparison slack for reach tests; both the verifier and the oracle use it.
inline constexpr double kReachTol = 1e-9;

struct VerifierParams {
  double h = 0.0;    // spatial resolution
  double dt = 0.0;   // time step
  double eps = 0.0;  // capture radius

  /// Smallest admissible capture radius for the given resolutions.
  [[nodiscard]] static double eps_floor(double h, double dt) { return 2.0 * (h + dt); }

  /// h = minEdge/1000, dt = 20h, eps at the floor. The sampled robber moves
  /// up to (1 + h/dt) times faster than a real one, so dt must exceed h.
  [[nodiscard]] static VerifierParams defaults(const MetricGraph& g) {
    VerifierParams p;
    p.h = g.min_edge_length() / 1000.0;
    p.dt = 20.0 * p.h;
    p.eps = eps_floor(p.h, p.dt);
    return p;
  }

  void validate() const {
    if (!(h > 0.0) || !(dt > 0.0) || !std::isfinite(h) || !std::isfinite(dt)) {
      throw VerifierError("h and dt must be positive");
    }
    const double floor = eps_floor(h, dt);
    if (!(eps >= floor * (1.0 - 1e-12))) {
      throw VerifierError("eps = " + std::to_string(eps) + " below the admissible minimum " +
                          std::to_string(floor) + " = 2(h + dt)");
    }
  }
};

enum class Verdict { kCapture, kSurvival };

inline const char* to_string(Verdict v) { return v == Verdict::kCapture ? "capture" : "survival"; }

struct VerifierResult {
  Verdict verdict = Verdict::kCapture;
  std::optional<double> time_bound;  // capture: every robber is eps-caught by then
  VerifierParams params;
  std::optional<TimedPath> witness;  // survival only
  std::optional<double> min_clearance;
  std::size_t steps = 0;
  std::size_t final_members = 0;
};

/// Membership over discretized samples.
class AvoidSet {
 public:
  AvoidSet() = default;
  explicit AvoidSet(std::size_t n) : words_((n + 63) / 64, 0), size_(n) {}

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  [[nodiscard]] std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  [[nodiscard]] bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  [[nodiscard]] std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i) {
      if (test(i)) out.push_back(i);
    }
    return out;
  }
  [[nodiscard]] bool subset_of(const AvoidSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~o.words_[i]) return false;
    }
    return true;
  }
  bool operator==(const AvoidSet& o) const = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Time grid t_n = min(n dt, T).
struct TimeGrid {
  std::vector<double> times;

  TimeGrid(double duration, double dt) {
    times.push_back(0.0);
    const auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-12));
    for (std::size_t n = 1; n <= steps; ++n) {
      times.push_back(std::min(static_cast<double>(n) * dt, duration));
    }
    if (times.size() > 1 && times.back() <= times[times.size() - 2]) times.pop_back();
    if (times.back() < duration) times.push_back(duration);
  }
  [[nodiscard]] std::size_t steps() const { return times.size() - 1; }
};

/// Robber reach and exclusion radius for one grid step.
struct StepRule {
  double reach = 0.0;
  double exclusion = 0.0;
};

inline StepRule step_rule(const DiscretizedGraph& d, const VerifierParams& p, double step) {
  return {step + d.max_spacing, p.eps - step - d.max_spacing / 2.0};
}

inline double initial_exclusion(const DiscretizedGraph& d, const VerifierParams& p) {
  return p.eps - d.max_spacing / 2.0;
}

/// Intrinsic distance from every sample to a set of edge intervals.
inline std::vector<double> distance_to_intervals(const MetricGraph& g, const DiscretizedGraph& d,
                                                 const std::vector<WalkLeg>& set) {
  const std::size_t nv = g.vertex_count();
  std::vector<double> dv(nv, kInf);
  for (VertexId v = 0; v < nv; ++v) {
    for (const auto& leg : set) {
      const Edge& e = g.edge(leg.edge);
      const double a = std::min(leg.from_offset, leg.to_offset);
      const double b = std::max(leg.from_offset, leg.to_offset);
      dv[v] = std::min({dv[v], g.vertex_distance(v, e.from) + a,
                        g.vertex_distance(v, e.to) + e.length - b});
    }
  }
  std::vector<double> out(d.size(), kInf);
  for (std::size_t i = 0; i < nv; ++i) out[i] = dv[i];
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    const auto& nodes = d.edge_nodes[e];
    for (std::size_t j = 1; j + 1 < nodes.size(); ++j) {
      const std::size_t node = nodes[j];
      const double o = d.points[node].offset;
      double best = std::min(o + dv[edge.from], edge.length - o + dv[edge.to]);
      for (const auto& leg : set) {
        if (leg.edge != e) continue;
        const double a = std::min(leg.from_offset, leg.to_offset);
        const double b = std::max(leg.from_offset, leg.to_offset);
        best = std::min(best, std::max({0.0, a - o, o - b}));
      }
      out[node] = best;
    }
  }
  return out;
}

/// Samples within `radius` of any source along the discretized graph.
inline AvoidSet dilate(const DiscretizedGraph& d, const AvoidSet& sources, double radius) {
  using Item = std::pair<double, std::size_t>;
  std::vector<double> dist(d.size(), kInf);
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (sources.test(i)) {
      dist[i] = 0.0;
      pq.push({0.0, i});
    }
  }
  const double limit = radius + kReachTol;
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (const auto& nb : d.adjacency[u]) {
      const double nd = du + nb.distance;
      if (nd <= limit && nd < dist[nb.node]) {
        dist[nb.node] = nd;
        pq.push({nd, nb.node});
      }
    }
  }
  AvoidSet out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (dist[i] <= limit) out.set(i);
  }
  return out;
}

/// Distances from one sample, truncated at `radius`.
inline std::vector<double> distances_from(const DiscretizedGraph& d, std::size_t source,
                                          double radius) {
  using Item = std::pair<double, std::size_t>;
  std::vector<double> dist(d.size(), kInf);
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (const auto& nb : d.adjacency[u]) {
      const double nd = du + nb.distance;
      if (nd <= radius + kReachTol && nd < dist[nb.node]) {
        dist[nb.node] = nd;
        pq.push({nd, nb.node});
      }
    }
  }
  return dist;
}

inline AvoidSet initial_avoid_set(const MetricGraph& g, const DiscretizedGraph& d,
                                  const GraphPoint& cop_start, double radius) {
  const auto dist = distance_to_intervals(g, d, {{cop_start.edge, cop_start.offset,
                                                  cop_start.offset}});
  AvoidSet out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (dist[i] > radius) out.set(i);
  }
  return out;
}

/// One grid step: dilate by the robber reach, then drop samples the cop
/// comes within `exclusion` of.
inline AvoidSet propagate_step(const MetricGraph& g, const DiscretizedGraph& d,
                               const AvoidSet& current, const std::vector<WalkLeg>& cop_sweep,
                               const StepRule& rule) {
  if (current.empty()) return current;
  AvoidSet next = dilate(d, current, rule.reach);
  const auto dist = distance_to_intervals(g, d, cop_sweep);
  AvoidSet out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (next.test(i) && dist[i] > rule.exclusion) out.set(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Continuous clearance between two paths

/// Exact minimum over [0, T] of the distance between two paths on one graph.
inline double min_clearance(const TimedPath& a, const TimedPath& b) {
  const MetricGraph& g = a.graph();
  const double end = std::min(a.duration(), b.duration());
  std::vector<double> ts = a.event_times(0.0, end);
  const auto tb = b.event_times(0.0, end);
  ts.insert(ts.end(), tb.begin(), tb.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  auto dist_at = [&](double t) { return intrinsic_distance(g, a.evaluate(t), b.evaluate(t)); };
  double best = dist_at(ts.front());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double t0 = ts[i];
    const double t1 = ts[i + 1];
    best = std::min(best, dist_at(t1));
    // Within a sub-interval both move linearly on fixed edges; only a
    // same-edge crossing can undercut the endpoint values.
    const double tm = 0.5 * (t0 + t1);
    const GraphPoint pa = a.evaluate(tm);
    const GraphPoint pb = b.evaluate(tm);
    const EdgeId e = pa.edge;
    const auto a0 = g.offset_on(a.evaluate(t0), e);
    const auto a1 = g.offset_on(a.evaluate(t1), e);
    const auto b0 = g.offset_on(b.evaluate(t0), e);
    const auto b1 = g.offset_on(b.evaluate(t1), e);
    if (!g.offset_on(pb, e) || !a0 || !a1 || !b0 || !b1) continue;
    const double gap0 = *a0 - *b0;
    const double gap1 = *a1 - *b1;
    if ((gap0 > 0.0) == (gap1 > 0.0) || gap0 == gap1) continue;
    const double tc = t0 + (t1 - t0) * gap0 / (gap0 - gap1);
    best = std::min(best, dist_at(std::clamp(tc, t0, t1)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Main procedure

namespace detail {

struct Propagation {
  TimeGrid grid;
  std::vector<AvoidSet> history;  // only when requested
  AvoidSet last;
  std::optional<std::size_t> empty_at;  // first step index with empty set
};

inline Propagation propagate(const TimedPath& cop, const DiscretizedGraph& d,
                             const VerifierParams& p, bool keep_history) {
  const MetricGraph& g = cop.graph();
  Propagation run{TimeGrid(cop.duration(), p.dt), {}, {}, {}};
  AvoidSet cur = initial_avoid_set(g, d, cop.evaluate(0.0), initial_exclusion(d, p));
  if (keep_history) run.history.push_back(cur);
  if (cur.empty()) run.empty_at = 0;
  for (std::size_t n = 1; n <= run.grid.steps() && !run.empty_at; ++n) {
    const double t0 = run.grid.times[n - 1];
    const double t1 = run.grid.times[n];
    cur = propagate_step(g, d, cur, cop.swept(t0, t1), step_rule(d, p, t1 - t0));
    if (keep_history) run.history.push_back(cur);
    if (cur.empty()) run.empty_at = n;
  }
  run.last = std::move(cur);
  return run;
}

}  // namespace detail

/// Backward pass through the membership history keeping maximum clearance
/// from the cop; ties go to the lowest sample index.
inline TimedPath extract_witness(const TimedPath& cop, const DiscretizedGraph& d,
                                 const VerifierParams& p, const std::vector<AvoidSet>& history,
                                 const TimeGrid& grid) {
  if (history.empty() || history.back().empty()) {
    throw VerifierError("no surviving sample: witness requested for a capture result");
  }
  const MetricGraph& g = cop.graph();
  const std::size_t steps = history.size() - 1;
  auto clearance = [&](std::size_t node, double t) {
    return intrinsic_distance(g, d.points[node], cop.evaluate(t));
  };
  auto pick_best = [&](const std::vector<std::size_t>& candidates, double t) {
    std::size_t best = candidates.front();
    double best_c = -1.0;
    for (std::size_t c : candidates) {
      const double v = clearance(c, t);
      if (v > best_c) {
        best_c = v;
        best = c;
      }
    }
    return best;
  };
  std::vector<std::size_t> nodes(steps + 1);
  nodes[steps] = pick_best(history[steps].members(), grid.times[steps]);
  for (std::size_t n = steps; n > 0; --n) {
    const double reach = step_rule(d, p, grid.times[n] - grid.times[n - 1]).reach;
    const auto dist = distances_from(d, nodes[n], reach);
    std::vector<std::size_t> preds;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (history[n - 1].test(i) && dist[i] <= reach + kReachTol) preds.push_back(i);
    }
    if (preds.empty()) throw VerifierError("inconsistent avoid-set history");
    nodes[n - 1] = pick_best(preds, grid.times[n - 1]);
  }
  std::vector<Breakpoint> bps;
  std::vector<std::vector<EdgeId>> routes;
  double speed = 1.0;
  for (std::size_t n = 0; n <= steps; ++n) {
    bps.push_back({grid.times[n], d.points[nodes[n]]});
    if (n == 0) continue;
    Route r = shortest_route(g, d.points[nodes[n - 1]], d.points[nodes[n]]);
    speed = std::max(speed, r.length / (grid.times[n] - grid.times[n - 1]));
    routes.push_back(std::move(r.edges));
  }
  if (steps == 0) {
    // Degenerate zero-duration cop: a single stationary point.
    return TimedPath::make(cop.graph_ptr(), {bps.front()}, {}, 1.0);
  }
  return TimedPath::make(cop.graph_ptr(), std::move(bps), std::move(routes),
                         speed * (1.0 + 1e-12));
}

inline VerifierResult verify(const TimedPath& cop, const VerifierParams& p,
                             bool want_witness = true) {
  p.validate();
  const DiscretizedGraph d = discretize(cop.graph(), p.h);
  VerifierResult res;
  res.params = p;
  detail::Propagation run = detail::propagate(cop, d, p, false);
  res.steps = run.grid.steps();
  res.final_members = run.last.count();
  if (run.empty_at) {
    res.verdict = Verdict::kCapture;
    res.time_bound = run.grid.times[*run.empty_at];
    return res;
  }
  res.verdict = Verdict::kSurvival;
  if (want_witness) {
    run = detail::propagate(cop, d, p, true);
    TimedPath w = extract_witness(cop, d, p, run.history, run.grid);
    res.min_clearance = min_clearance(w, cop);
    res.witness = std::move(w);
  }
  return res;
}

/// Earliest grid time at which the avoid set is empty.
inline double min_capture_time(const TimedPath& cop, const VerifierParams& p) {
  const VerifierResult r = verify(cop, p, false);
  if (r.verdict != Verdict::kCapture) throw VerifierError("cop path does not capture");
  return *r.time_bound;
}

// ---------------------------------------------------------------------------
// Enumeration oracle

struct OracleLimits {
  std::size_t max_samples = 12;
  std::size_t max_steps = 12;
};

/// Minimum over [t0, t1] of the distance from a fixed point to the cop,
/// evaluated at the cop's event times and at times the cop passes x.
inline double oracle_distance_to_cop(const TimedPath& cop, const GraphPoint& x, double t0,
                                     double t1) {
  const MetricGraph& g = cop.graph();
  auto ts = cop.event_times(t0, t1);
  double best = kInf;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    best = std::min(best, intrinsic_distance(g, x, cop.evaluate(ts[i])));
    if (i + 1 == ts.size()) break;
    const double ta = ts[i];
    const double tb = ts[i + 1];
    const GraphPoint pa = cop.evaluate(ta);
    const GraphPoint pb = cop.evaluate(tb);
    const GraphPoint pm = cop.evaluate(0.5 * (ta + tb));
    const auto xo = g.offset_on(x, pm.edge);
    const auto oa = g.offset_on(pa, pm.edge);
    const auto ob = g.offset_on(pb, pm.edge);
    if (!xo || !oa || !ob || *oa == *ob) continue;
    const double frac = (*xo - *oa) / (*ob - *oa);
    if (frac > 0.0 && frac < 1.0) {
      best = std::min(best, intrinsic_distance(g, x, cop.evaluate(ta + frac * (tb - ta))));
    }
  }
  return best;
}

/// Exhaustive search over sampled robber sequences using point-to-point
/// distances only.
inline VerifierResult brute_force_oracle(const TimedPath& cop, const VerifierParams& p,
                                         OracleLimits limits = {}) {
  p.validate();
  const MetricGraph& g = cop.graph();
  const DiscretizedGraph d = discretize(g, p.h);
  const TimeGrid grid(cop.duration(), p.dt);
  if (d.size() > limits.max_samples || grid.steps() > limits.max_steps) {
    throw VerifierError("instance too large for the enumeration oracle: " +
                        std::to_string(d.size()) + " samples, " + std::to_string(grid.steps()) +
                        " steps");
  }
  const std::size_t n = d.size();
  const std::size_t steps = grid.steps();
  // alive[k][x]: sample x is clear of the cop for step k (k = 0 is the start).
  std::vector<std::vector<bool>> alive(steps + 1, std::vector<bool>(n, false));
  const double r0 = initial_exclusion(d, p);
  for (std::size_t x = 0; x < n; ++x) {
    alive[0][x] = intrinsic_distance(g, d.points[x], cop.evaluate(0.0)) > r0;
  }
  std::vector<double> reach(steps + 1, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const StepRule rule = step_rule(d, p, grid.times[k] - grid.times[k - 1]);
    reach[k] = rule.reach;
    for (std::size_t x = 0; x < n; ++x) {
      alive[k][x] = oracle_distance_to_cop(cop, d.points[x], grid.times[k - 1], grid.times[k]) >
                    rule.exclusion;
    }
  }
  // Depth-first enumeration; a (step, sample) pair proven dead is not retried.
  std::vector<std::vector<bool>> dead(steps + 1, std::vector<bool>(n, false));
  std::size_t deepest = 0;
  bool any_start = false;
  std::function<bool(std::size_t, std::size_t)> extend = [&](std::size_t k, std::size_t x) {
    deepest = std::max(deepest, k);
    if (k == steps) return true;
    for (std::size_t y = 0; y < n; ++y) {
      if (!alive[k + 1][y] || dead[k + 1][y]) continue;
      if (intrinsic_distance(g, d.points[x], d.points[y]) > reach[k + 1] + kReachTol) continue;
      if (extend(k + 1, y)) return true;
      dead[k + 1][y] = true;
    }
    return false;
  };
  VerifierResult res;
  res.params = p;
  res.steps = steps;
  for (std::size_t x = 0; x < n; ++x) {
    if (!alive[0][x]) continue;
    any_start = true;
    if (extend(0, x)) {
      res.verdict = Verdict::kSurvival;
      return res;
    }
  }
  res.verdict = Verdict::kCapture;
  res.time_bound = any_start ? grid.times[deepest + 1] : 0.0;
  return res;
}

}  // namespace copsrobber
