// strategies.hpp - explicit cop strategies: star cascade, comb sweep,
// per-vertex securing, the generic finiteness strategy, cycle loops and
// naive double-tree sweeps.
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "copsrobber/metric_graph.hpp"
#include "copsrobber/trajectory.hpp"

namespace copsrobber {

class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}
}  // namespace detail

/// Positive root of x^n + x^(n-1) + ... + x = c (strictly increasing for x > 0).
inline double geometric_root(int n, double c) {
  if (n < 1 || !(c > 0.0)) throw StrategyError("geometric_root needs n >= 1 and c > 0");
  if (n == 1) return c;
  auto poly = [n](double x) {
    double sum = 0.0;
    double pw = 1.0;
    for (int j = 0; j < n; ++j) {
      pw *= x;
      sum += pw;
    }
    return sum;
  };
  double lo = 0.0;
  double hi = std::max(1.0, c) + 1.0;
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (poly(mid) < c ? lo : hi) = mid;
  }
  return std::abs(poly(lo) - c) <= std::abs(poly(hi) - c) ? lo : hi;
}

/// Growth ratio of the k-star cascade: root of x^(k-2) + ... + x = (s-1)/2.
inline double lambda_root(int k, double s) {
  if (k < 3) throw StrategyError("lambda_root requires k >= 3");
  const double threshold = 2.0 * k - 3.0;
  if (!(s > threshold)) {
    throw StrategyError("star cascade requires s > 2k-3 = " + detail::fmt_num(threshold));
  }
  return geometric_root(k - 2, (s - 1.0) / 2.0);
}

// ---------------------------------------------------------------------------
// Cascade bookkeeping shared by the star, comb and vertex-securing builders.

/// An arm is an edge leaving the hub; `leaf` arms are cleared when reached.
struct CascadeArm {
  EdgeId edge = 0;
  double length = 0.0;
  bool leaf = false;
};

/// Guaranteed distance of any uncaught robber from the hub, per arm.
struct ClearanceState {
  std::vector<double> radius;
  std::vector<bool> cleared;

  [[nodiscard]] std::size_t uncleared() const {
    return static_cast<std::size_t>(std::count(cleared.begin(), cleared.end(), false));
  }
};

struct Excursion {
  std::size_t arm = 0;
  double start = 0.0;     // relative to the cascade start
  double duration = 0.0;  // time slot; the cop idles at the hub after returning
  double reach = 0.0;     // depth along the arm
};

struct CascadeTrace {
  double ratio = 0.0;
  double first_duration = 0.0;
  std::vector<Excursion> excursions;
  std::vector<ClearanceState> states;  // states[j] holds before excursion j
  bool completed = false;              // stop rule reached

  [[nodiscard]] double total_time() const {
    return excursions.empty() ? 0.0 : excursions.back().start + excursions.back().duration;
  }
  [[nodiscard]] const ClearanceState& final_state() const { return states.back(); }
};

enum class CascadeStop {
  kOneArmLeft,   // star / comb: stop when at most one arm is uncleared
  kReachCapped,  // securing: stop before an excursion would exceed the arm length
};

/// Applies one excursion to a clearance state. Robbers on other arms may close
/// in by the slot duration; a robber on the explored arm was beyond the cop at
/// the turnaround.
inline ClearanceState apply_excursion(const ClearanceState& before,
                                      const std::vector<CascadeArm>& arms, const Excursion& ex,
                                      double s) {
  ClearanceState after = before;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (after.cleared[i]) continue;
    if (i == ex.arm) {
      const CascadeArm& arm = arms[i];
      if (arm.leaf && ex.reach >= arm.length - kGeomTol) {
        after.cleared[i] = true;
        after.radius[i] = arm.length;
        continue;
      }
      const double turnaround = ex.reach / s;
      after.radius[i] = std::max({ex.reach - (ex.duration - turnaround),
                                  before.radius[i] - ex.duration, 0.0});
    } else {
      after.radius[i] = std::max(before.radius[i] - ex.duration, 0.0);
    }
    after.radius[i] = std::min(after.radius[i], arms[i].length);
  }
  return after;
}

/// Runs the geometric cascade: excursion durations first_duration * ratio^j,
/// cycling over the uncleared arms. Throws when some robber could reach the
/// hub while the cop is away.
inline CascadeTrace simulate_cascade(const std::vector<CascadeArm>& arms, double s,
                                     double ratio, double first_duration,
                                     ClearanceState initial, CascadeStop stop,
                                     std::size_t max_excursions = 200000) {
  CascadeTrace trace;
  trace.ratio = ratio;
  trace.first_duration = first_duration;
  trace.states.push_back(std::move(initial));
  const std::size_t n = arms.size();
  std::size_t next_arm = 0;
  for (std::size_t j = 0; j < max_excursions; ++j) {
    const ClearanceState& cur = trace.states.back();
    if (stop == CascadeStop::kOneArmLeft && cur.uncleared() <= 1) {
      trace.completed = true;
      return trace;
    }
    while (cur.cleared[next_arm % n]) ++next_arm;
    const std::size_t arm = next_arm % n;
    ++next_arm;

    Excursion ex;
    ex.arm = arm;
    ex.duration = first_duration * std::pow(ratio, static_cast<double>(j));
    // Anchored to the geometric series rather than accumulated.
    ex.start = ratio == 1.0 ? first_duration * static_cast<double>(j)
                            : first_duration * (std::pow(ratio, static_cast<double>(j)) - 1.0) /
                                  (ratio - 1.0);
    const double depth = s * ex.duration / 2.0;
    if (stop == CascadeStop::kReachCapped && depth > arms[arm].length) {
      trace.completed = true;
      return trace;
    }
    ex.reach = std::min(depth, arms[arm].length);
    const double away = 2.0 * ex.reach / s;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == arm || cur.cleared[i]) continue;
      if (cur.radius[i] < away * (1.0 - 1e-9) - 1e-15) {
        throw StrategyError("cascade invariant violated: arm " + std::to_string(i) +
                            " radius " + detail::fmt_num(cur.radius[i]) + " below away time " +
                            detail::fmt_num(away));
      }
    }
    trace.excursions.push_back(ex);
    trace.states.push_back(apply_excursion(cur, arms, ex, s));
  }
  return trace;
}

/// Initial radii for a cascade that pretends to have been running forever:
/// arm j (in visiting order) holds d0 * (1 + r + ... + r^(j - skip)), and
/// the first `skip` arms hold nothing.
inline ClearanceState steady_initial_state(std::size_t arms, std::size_t skip, double ratio,
                                           double d0) {
  ClearanceState st;
  st.radius.assign(arms, 0.0);
  st.cleared.assign(arms, false);
  double acc = 0.0;
  double pw = 1.0;
  for (std::size_t j = skip; j < arms; ++j) {
    acc += pw * d0;
    pw *= ratio;
    st.radius[j] = acc;
  }
  return st;
}

/// Emits the excursions of a cascade hub-relative, starting at builder.now().
inline void emit_cascade(PathBuilder& b, VertexId hub, const std::vector<CascadeArm>& arms,
                         const CascadeTrace& trace) {
  const MetricGraph& g = b.graph();
  const double t0 = b.now();
  for (const auto& ex : trace.excursions) {
    b.wait_until(t0 + ex.start);
    const EdgeId e = arms[ex.arm].edge;
    const double base = g.vertex_offset(e, hub);
    const double target = base == 0.0 ? ex.reach : g.edge(e).length - ex.reach;
    b.go_along(e, target);
    b.go_along(e, base);
  }
}

// ---------------------------------------------------------------------------
// Star graphs

struct StarSchedule {
  int k = 0;
  double s = 0.0;
  double lambda = 0.0;
  double truncation = 0.0;        // first excursion duration d0
  int truncation_index = 0;       // m with lambda^(-m(k-1)) closest to d0
  double cascade_start = 0.0;     // absolute time the cop is back at the centre
  VertexId center = 0;
  std::vector<CascadeArm> arms;   // cascade arms v_1 .. v_{k-1}
  EdgeId first_arm = 0;           // v_k, cleared by the initial trip
  CascadeTrace trace;
};

struct StarStrategy {
  TimedPath path;
  StarSchedule schedule;
};

/// Returns the centre when g is a star with k >= 3 arms.
inline std::optional<VertexId> star_center(const MetricGraph& g) {
  std::optional<VertexId> center;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 1) continue;
    if (center) return std::nullopt;
    center = v;
  }
  if (!center || g.degree(*center) < 3 || g.degree(*center) != g.edge_count()) return std::nullopt;
  return center;
}

/// Clearance trace of the star cascade on the arms given, starting from the
/// steady initial radii scaled to d0.
inline CascadeTrace simulate_clearance(const std::vector<CascadeArm>& arms, double s,
                                       double lambda, double d0) {
  return simulate_cascade(arms, s, lambda, d0, steady_initial_state(arms.size(), 1, lambda, d0),
                          CascadeStop::kOneArmLeft);
}

inline StarStrategy star_strategy(GraphPtr g, double s, double delta) {
  const auto center = star_center(*g);
  if (!center) throw StrategyError("star strategy requires a star graph with k >= 3 arms");
  const int k = static_cast<int>(g->degree(*center));
  if (!(delta > 0.0)) throw StrategyError("truncation delta must be positive");
  if (!(s > 2.0 * k - 3.0)) {
    throw StrategyError("star strategy requires s > 2k-3 = " + detail::fmt_num(2.0 * k - 3.0));
  }
  StarSchedule sched;
  sched.k = k;
  sched.s = s;
  sched.lambda = lambda_root(k, s);
  sched.truncation = delta;
  sched.truncation_index = static_cast<int>(
      std::lround(-std::log(delta) / (static_cast<double>(k - 1) * std::log(sched.lambda))));
  sched.center = *center;
  const auto& inc = g->incident(*center);
  for (std::size_t i = 0; i + 1 < inc.size(); ++i) {
    sched.arms.push_back({inc[i], g->edge(inc[i]).length, true});
  }
  sched.first_arm = inc.back();
  sched.trace = simulate_clearance(sched.arms, s, sched.lambda, delta);
  if (!sched.trace.completed) throw StrategyError("star cascade did not terminate");

  PathBuilder b(g, g->vertex_point(*center), s);
  const EdgeId ek = sched.first_arm;
  b.go_along(ek, g->vertex_offset(ek, g->edge(ek).other(*center)));
  b.go_along(ek, g->vertex_offset(ek, *center));
  sched.cascade_start = b.now();
  emit_cascade(b, *center, sched.arms, sched.trace);
  // Walk out the one arm left uncleared.
  const auto& fin = sched.trace.final_state();
  for (std::size_t i = 0; i < sched.arms.size(); ++i) {
    if (fin.cleared[i]) continue;
    const EdgeId e = sched.arms[i].edge;
    b.go_along(e, g->vertex_offset(e, g->edge(e).other(*center)));
  }
  return {b.build(), std::move(sched)};
}

// ---------------------------------------------------------------------------
// Comb graphs

struct CombLayout {
  std::vector<VertexId> backbone;  // v_1 .. v_k
  std::vector<VertexId> teeth;     // u_1 .. u_k
};

inline std::optional<CombLayout> comb_layout(const MetricGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n < 4 || n % 2 != 0 || g.edge_count() != n - 1) return std::nullopt;
  const std::size_t k = n / 2;
  std::vector<std::optional<VertexId>> tooth(n);
  std::size_t leaves = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (!g.is_leaf(v)) continue;
    ++leaves;
    const VertexId base = g.edge(g.incident(v).front()).other(v);
    if (tooth[base] || g.is_leaf(base)) return std::nullopt;
    tooth[base] = v;
  }
  if (leaves != k) return std::nullopt;
  // Backbone: vertices carrying a tooth, linked into a path.
  std::optional<VertexId> start;
  for (VertexId v = 0; v < n; ++v) {
    if (!tooth[v]) continue;
    if (g.degree(v) == 2 || k == 1) {
      start = v;
      break;
    }
  }
  if (!start) return std::nullopt;
  CombLayout layout;
  std::optional<VertexId> prev;
  VertexId cur = *start;
  while (true) {
    layout.backbone.push_back(cur);
    layout.teeth.push_back(*tooth[cur]);
    std::optional<VertexId> next;
    for (EdgeId e : g.incident(cur)) {
      const VertexId w = g.edge(e).other(cur);
      if (w == *tooth[cur] || (prev && w == *prev)) continue;
      if (!tooth[w] || next) return std::nullopt;
      next = w;
    }
    if (!next) break;
    prev = cur;
    cur = *next;
  }
  if (layout.backbone.size() != k) return std::nullopt;
  return layout;
}

struct CombStrategy {
  TimedPath path;
  CombLayout layout;
  double lambda = 0.0;
  std::vector<CascadeTrace> cascades;  // one per interior backbone vertex
};

inline CombStrategy comb_strategy(GraphPtr g, double s, double delta) {
  const auto layout = comb_layout(*g);
  if (!layout || layout->backbone.size() < 2) {
    throw StrategyError("comb strategy requires a comb graph B_k");
  }
  const double len = g->edge(0).length;
  for (const auto& e : g->edges()) {
    if (std::abs(e.length - len) > kGeomTol * std::max(1.0, len)) {
      throw StrategyError("comb strategy requires all edge lengths equal");
    }
  }
  if (!(s > 3.0)) throw StrategyError("comb strategy requires s > 3");
  if (!(delta > 0.0)) throw StrategyError("truncation delta must be positive");

  CombStrategy out{TimedPath{}, *layout, (s - 1.0) / 2.0, {}};
  const auto& bb = layout->backbone;
  const auto& teeth = layout->teeth;
  const std::size_t k = bb.size();
  PathBuilder b(g, g->vertex_point(teeth[0]), s);
  b.go_to(g->vertex_point(bb[0]));
  b.go_to(g->vertex_point(bb[1]));
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const EdgeId tooth_edge = *g->edge_between(bb[i], teeth[i]);
    const EdgeId forward = *g->edge_between(bb[i], bb[i + 1]);
    const std::vector<CascadeArm> arms{{tooth_edge, len, true}, {forward, len, false}};
    auto trace = simulate_cascade(arms, s, out.lambda, delta,
                                  steady_initial_state(2, 1, out.lambda, delta),
                                  CascadeStop::kOneArmLeft);
    if (!trace.completed) throw StrategyError("comb cascade did not terminate");
    emit_cascade(b, bb[i], arms, trace);
    out.cascades.push_back(std::move(trace));
    b.go_to(g->vertex_point(bb[i + 1]));
  }
  b.go_to(g->vertex_point(teeth[k - 1]));
  out.path = b.build();
  return out;
}

// ---------------------------------------------------------------------------
// Securing a vertex and the generic finiteness strategy

struct SecureResult {
  CascadeTrace trace;
  std::vector<CascadeArm> arms;
  double radius = 0.0;    // guaranteed robber distance from v afterwards (eps_v)
  double duration = 0.0;  // T_v
};

/// Plans the securing cascade around v; excursions stay within half the
/// shortest incident edge.
inline SecureResult plan_secure_vertex(const MetricGraph& g, VertexId v, double s, double delta) {
  const std::size_t k = g.degree(v);
  if (!(s > 2.0 * static_cast<double>(k) + 1.0)) {
    throw StrategyError("securing a degree-" + std::to_string(k) + " vertex requires s > " +
                        detail::fmt_num(2.0 * static_cast<double>(k) + 1.0));
  }
  if (!(delta > 0.0)) throw StrategyError("truncation delta must be positive");
  double cap = kInf;
  for (EdgeId e : g.incident(v)) cap = std::min(cap, g.edge(e).length / 2.0);
  SecureResult res;
  for (EdgeId e : g.incident(v)) res.arms.push_back({e, cap, false});
  if (k == 1) {
    // Single out-and-back to the cap.
    const double d = 2.0 * cap / s;
    res.trace.ratio = 1.0;
    res.trace.first_duration = d;
    res.trace.states.push_back({{0.0}, {false}});
    res.trace.excursions.push_back({0, 0.0, d, cap});
    res.trace.states.push_back(apply_excursion(res.trace.states[0], res.arms,
                                               res.trace.excursions[0], s));
    res.trace.completed = true;
  } else {
    const double mu = geometric_root(static_cast<int>(k), (s - 1.0) / 2.0);
    res.trace = simulate_cascade(res.arms, s, mu, delta,
                                 steady_initial_state(k, 0, mu, delta), CascadeStop::kReachCapped);
    if (!res.trace.completed) throw StrategyError("securing cascade did not terminate");
  }
  const auto& fin = res.trace.final_state();
  res.radius = *std::min_element(fin.radius.begin(), fin.radius.end());
  res.duration = res.trace.total_time();
  return res;
}

struct SecureFragment {
  TimedPath path;
  SecureResult plan;
};

/// The securing cascade as a standalone path starting and ending at v.
inline SecureFragment secure_vertex(GraphPtr g, VertexId v, double s, double delta) {
  SecureResult plan = plan_secure_vertex(*g, v, s, delta);
  PathBuilder b(g, g->vertex_point(v), s);
  emit_cascade(b, v, plan.arms, plan.trace);
  b.wait_until(plan.duration);
  return {b.build(), std::move(plan)};
}

struct FinitenessPlan {
  double s = 0.0;
  bool certified = false;
  double slack = 0.0;  // min over v of eps_v - (T_end - secured_at_v)
  TimedPath path;
};

inline FinitenessPlan plan_finiteness(GraphPtr g, double s, double delta) {
  FinitenessPlan plan;
  plan.s = s;
  const VertexId start = 0;
  PathBuilder b(g, g->vertex_point(start), s);
  std::vector<bool> secured(g->vertex_count(), false);
  std::vector<std::pair<double, double>> done;  // (time secured, radius)
  auto secure_here = [&](VertexId v) {
    if (secured[v]) return;
    secured[v] = true;
    const SecureResult r = plan_secure_vertex(*g, v, s, delta);
    const double t0 = b.now();
    emit_cascade(b, v, r.arms, r.trace);
    b.wait_until(t0 + r.duration);
    done.emplace_back(b.now(), r.radius);
  };
  secure_here(start);
  const Walk first = double_tree_walk(*g, g->vertex_point(start));
  for (const auto& leg : first.legs) {
    b.go_along(leg.edge, leg.to_offset);
    if (auto v = g->vertex_at(b.position())) secure_here(*v);
  }
  b.follow(double_tree_walk(*g, b.position()));
  const double end = b.now();
  plan.slack = kInf;
  for (const auto& [t, radius] : done) plan.slack = std::min(plan.slack, radius - (end - t));
  plan.certified = plan.slack > 0.0;
  plan.path = b.build();
  return plan;
}

/// Smallest speed found by doubling from max(2 deg + 1) at which the
/// finiteness construction certifies itself.
inline double sufficient_speed(const GraphPtr& g, double delta) {
  double s = 0.0;
  for (VertexId v = 0; v < g->vertex_count(); ++v) {
    s = std::max(s, 2.0 * static_cast<double>(g->degree(v)) + 1.0);
  }
  s *= 1.01;
  for (int it = 0; it < 64; ++it, s *= 2.0) {
    if (plan_finiteness(g, s, delta).certified) return s;
  }
  throw StrategyError("no certified speed found for the finiteness strategy");
}

inline TimedPath finiteness_strategy(GraphPtr g, double s, double delta) {
  double floor = 0.0;
  for (VertexId v = 0; v < g->vertex_count(); ++v) {
    floor = std::max(floor, 2.0 * static_cast<double>(g->degree(v)) + 1.0);
  }
  if (s > floor) {
    FinitenessPlan plan = plan_finiteness(g, s, delta);
    if (plan.certified) return std::move(plan.path);
  }
  throw StrategyError("finiteness strategy requires s >= " +
                      detail::fmt_num(sufficient_speed(g, delta)) + " on this graph");
}

// ---------------------------------------------------------------------------
// Cycles and naive sweeps

inline bool is_cycle(const MetricGraph& g) {
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) != 2) return false;
  }
  return true;
}

/// Full-speed loop around a cycle for the given duration.
inline TimedPath cycle_loop(GraphPtr g, double s, double duration) {
  if (!is_cycle(*g)) throw StrategyError("cycle strategy requires a cycle graph");
  if (!(s > 0.0) || !(duration > 0.0)) throw StrategyError("cycle loop needs s > 0 and T > 0");
  // Edge order around the cycle starting at vertex 0.
  std::vector<EdgeId> order;
  VertexId cur = 0;
  EdgeId e = g->incident(0).front();
  do {
    order.push_back(e);
    cur = g->edge(e).other(cur);
    const auto& inc = g->incident(cur);
    e = inc[0] == e ? inc[1] : inc[0];
  } while (cur != 0);

  PathBuilder b(g, g->vertex_point(0), s);
  double remaining = s * duration;
  VertexId at = 0;
  for (std::size_t i = 0; remaining > kGeomTol; i = (i + 1) % order.size()) {
    const Edge& edge = g->edge(order[i]);
    const double step = std::min(remaining, edge.length);
    const double from = g->vertex_offset(order[i], at);
    const double to = from == 0.0 ? step : edge.length - step;
    b.go_along(order[i], to);
    remaining -= step;
    at = edge.other(at);
  }
  b.wait_until(duration);
  return b.build();
}

/// Loop of duration total_length / (s - 1).
inline TimedPath cycle_strategy(GraphPtr g, double s) {
  if (!is_cycle(*g)) throw StrategyError("cycle strategy requires a cycle graph");
  if (!(s > 1.0)) throw StrategyError("cycle strategy requires s > 1");
  return cycle_loop(g, s, g->total_length() / (s - 1.0));
}

/// Double-tree walk at full speed from `start` (vertex 0 by default).
inline TimedPath sweep_strategy(GraphPtr g, double s, std::optional<GraphPoint> start = {}) {
  if (!(s > 0.0)) throw StrategyError("sweep requires s > 0");
  const GraphPoint from = start.value_or(g->vertex_point(0));
  PathBuilder b(g, from, s);
  b.follow(double_tree_walk(*g, from));
  if (b.now() == 0.0) b.wait(1.0);
  return b.build();
}

}  // namespace copsrobber
