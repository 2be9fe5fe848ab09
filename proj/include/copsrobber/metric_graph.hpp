// metric_graph.hpp - compact metric graphs, intrinsic metric, transforms,
// edge-covering walks and spatial discretization.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace copsrobber {

/// Absolute tolerance for all geometric comparisons.
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

using VertexId = std::size_t;
using EdgeId = std::size_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Edge as supplied by the user, before normalization.
struct EdgeSpec {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;
};

struct Edge {
  std::string id;
  VertexId from = 0;
  VertexId to = 0;
  double length = 0.0;

  [[nodiscard]] VertexId other(VertexId v) const { return v == from ? to : from; }
};

/// Location on an edge; offset 0 is edge.from, offset length is edge.to.
struct GraphPoint {
  EdgeId edge = 0;
  double offset = 0.0;
};

/// One straight traversal along a single edge.
struct WalkLeg {
  EdgeId edge = 0;
  double from_offset = 0.0;
  double to_offset = 0.0;

  [[nodiscard]] double length() const { return std::abs(to_offset - from_offset); }
};

/// Unparameterized edge-covering walk.
struct Walk {
  GraphPoint start;
  std::vector<WalkLeg> legs;

  [[nodiscard]] double length() const {
    double total = 0.0;
    for (const auto& leg : legs) total += leg.length();
    return total;
  }
};

/// Geodesic between two points: the sequence of edges visited, in order.
struct Route {
  std::vector<EdgeId> edges;
  double length = 0.0;
};

class MetricGraph {
 public:
  /// Validates, subdivides loops and parallel edges, and checks connectivity.
  static MetricGraph build(const std::vector<std::string>& vertices,
                           const std::vector<EdgeSpec>& edges) {
    std::map<std::string, VertexId> index;
    std::vector<std::string> names;
    for (const auto& name : vertices) {
      if (!index.emplace(name, names.size()).second) {
        throw GraphError("duplicate vertex id '" + name + "'");
      }
      names.push_back(name);
    }
    std::set<std::string> edge_ids;
    for (const auto& spec : edges) {
      if (!edge_ids.insert(spec.id).second) {
        throw GraphError("duplicate edge id '" + spec.id + "'");
      }
    }

    auto fresh_vertex = [&](std::string name) {
      while (index.count(name) != 0) name += "'";
      index.emplace(name, names.size());
      names.push_back(name);
      return names.size() - 1;
    };
    auto fresh_edge_id = [&](std::string id) {
      while (edge_ids.count(id) != 0) id += "'";
      edge_ids.insert(id);
      return id;
    };

    std::vector<Edge> out;
    std::set<std::pair<VertexId, VertexId>> seen_pairs;
    for (const auto& spec : edges) {
      auto from = index.find(spec.from);
      auto to = index.find(spec.to);
      if (from == index.end() || to == index.end()) {
        throw GraphError("edge '" + spec.id + "' references an undeclared vertex");
      }
      if (!(spec.length > 0.0) || !std::isfinite(spec.length)) {
        throw GraphError("edge '" + spec.id + "' must have a positive finite length");
      }
      const VertexId u = from->second;
      const VertexId v = to->second;
      if (u == v) {
        // Loop: two midpoints turn it into a triangle of the same total length.
        const VertexId a = fresh_vertex(spec.id + "#a");
        const VertexId b = fresh_vertex(spec.id + "#b");
        const double third = spec.length / 3.0;
        out.push_back({fresh_edge_id(spec.id + "#1"), u, a, third});
        out.push_back({fresh_edge_id(spec.id + "#2"), a, b, third});
        out.push_back({fresh_edge_id(spec.id + "#3"), b, v, third});
        continue;
      }
      const auto key = std::minmax(u, v);
      if (!seen_pairs.insert({key.first, key.second}).second) {
        const VertexId m = fresh_vertex(spec.id + "#mid");
        const double half = spec.length / 2.0;
        out.push_back({fresh_edge_id(spec.id + "#1"), u, m, half});
        out.push_back({fresh_edge_id(spec.id + "#2"), m, v, half});
        continue;
      }
      out.push_back({spec.id, u, v, spec.length});
    }
    return MetricGraph(std::move(names), std::move(out));
  }

  [[nodiscard]] std::size_t vertex_count() const { return names_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] const std::string& vertex_name(VertexId v) const { return names_.at(v); }
  [[nodiscard]] const std::vector<std::string>& vertex_names() const { return names_; }
  [[nodiscard]] const Edge& edge(EdgeId e) const { return edges_.at(e); }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<EdgeId>& incident(VertexId v) const { return incident_.at(v); }
  [[nodiscard]] std::size_t degree(VertexId v) const { return incident_.at(v).size(); }

  [[nodiscard]] std::optional<VertexId> find_vertex(const std::string& name) const {
    for (VertexId v = 0; v < names_.size(); ++v) {
      if (names_[v] == name) return v;
    }
    return std::nullopt;
  }
  [[nodiscard]] std::optional<EdgeId> find_edge(const std::string& id) const {
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      if (edges_[e].id == id) return e;
    }
    return std::nullopt;
  }

  /// Shortest-path distance between vertices.
  [[nodiscard]] double vertex_distance(VertexId u, VertexId v) const {
    return dist_[u * names_.size() + v];
  }

  /// Vertex sequence of a shortest path from u to v (inclusive).
  [[nodiscard]] std::vector<VertexId> vertex_path(VertexId u, VertexId v) const {
    std::vector<VertexId> path{u};
    while (u != v) {
      u = next_[u * names_.size() + v];
      path.push_back(u);
    }
    return path;
  }

  [[nodiscard]] std::optional<EdgeId> edge_between(VertexId u, VertexId v) const {
    for (EdgeId e : incident_[u]) {
      if (edges_[e].other(u) == v) return e;
    }
    return std::nullopt;
  }

  /// The vertex two edges have in common, if any.
  [[nodiscard]] std::optional<VertexId> shared_vertex(EdgeId a, EdgeId b) const {
    const Edge& ea = edges_[a];
    const Edge& eb = edges_[b];
    if (ea.from == eb.from || ea.from == eb.to) return ea.from;
    if (ea.to == eb.from || ea.to == eb.to) return ea.to;
    return std::nullopt;
  }

  /// Offset of vertex v along edge e (0 or length).
  [[nodiscard]] double vertex_offset(EdgeId e, VertexId v) const {
    const Edge& edge = edges_[e];
    if (edge.from == v) return 0.0;
    if (edge.to == v) return edge.length;
    throw GraphError("vertex is not an endpoint of edge '" + edge.id + "'");
  }

  [[nodiscard]] GraphPoint vertex_point(VertexId v) const {
    const EdgeId e = incident_.at(v).front();
    return {e, vertex_offset(e, v)};
  }

  /// The vertex a point sits on, if its offset is at an endpoint.
  [[nodiscard]] std::optional<VertexId> vertex_at(const GraphPoint& p) const {
    const Edge& e = edges_.at(p.edge);
    if (p.offset <= kGeomTol) return e.from;
    if (p.offset >= e.length - kGeomTol) return e.to;
    return std::nullopt;
  }

  /// Offset of p measured along edge e, when p lies on e.
  [[nodiscard]] std::optional<double> offset_on(const GraphPoint& p, EdgeId e) const {
    if (p.edge == e) return p.offset;
    if (auto v = vertex_at(p)) {
      const Edge& edge = edges_[e];
      if (edge.from == *v) return 0.0;
      if (edge.to == *v) return edge.length;
    }
    return std::nullopt;
  }

  [[nodiscard]] bool contains(const GraphPoint& p) const {
    return p.edge < edges_.size() && p.offset >= -kGeomTol &&
           p.offset <= edges_[p.edge].length + kGeomTol;
  }

  [[nodiscard]] double total_length() const {
    double total = 0.0;
    for (const auto& e : edges_) total += e.length;
    return total;
  }

  [[nodiscard]] double min_edge_length() const {
    double m = kInf;
    for (const auto& e : edges_) m = std::min(m, e.length);
    return m;
  }

  /// A vertex is a leaf when exactly one edge is incident to it.
  [[nodiscard]] bool is_leaf(VertexId v) const { return incident_[v].size() == 1; }

  /// Builds from an already simple edge list (no loops, no parallel edges).
  static MetricGraph from_simple(std::vector<std::string> names, std::vector<Edge> edges) {
    return MetricGraph(std::move(names), std::move(edges));
  }

 private:
  MetricGraph(std::vector<std::string> names, std::vector<Edge> edges)
      : names_(std::move(names)), edges_(std::move(edges)), incident_(names_.size()) {
    if (edges_.empty()) throw GraphError("graph must contain at least one edge");
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      const Edge& edge = edges_[e];
      if (!(edge.length > 0.0)) throw GraphError("edge '" + edge.id + "' has nonpositive length");
      if (edge.from == edge.to) throw GraphError("edge '" + edge.id + "' is a loop");
      incident_[edge.from].push_back(e);
      incident_[edge.to].push_back(e);
    }
    check_connected();
    compute_distances();
  }

  void check_connected() const {
    std::vector<bool> seen(names_.size(), false);
    std::vector<VertexId> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      for (EdgeId e : incident_[u]) {
        const VertexId w = edges_[e].other(u);
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    if (count != names_.size()) {
      throw GraphError("graph is disconnected: no winning strategy exists");
    }
  }

  // Floyd-Warshall; graphs handled here have at most a few hundred vertices.
  void compute_distances() {
    const std::size_t n = names_.size();
    dist_.assign(n * n, kInf);
    next_.assign(n * n, 0);
    for (VertexId v = 0; v < n; ++v) {
      dist_[v * n + v] = 0.0;
      next_[v * n + v] = v;
    }
    for (const auto& e : edges_) {
      if (e.length < dist_[e.from * n + e.to]) {
        dist_[e.from * n + e.to] = dist_[e.to * n + e.from] = e.length;
        next_[e.from * n + e.to] = e.to;
        next_[e.to * n + e.from] = e.from;
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double ik = dist_[i * n + k];
        if (ik == kInf) continue;
        for (std::size_t j = 0; j < n; ++j) {
          const double via = ik + dist_[k * n + j];
          if (via < dist_[i * n + j]) {
            dist_[i * n + j] = via;
            next_[i * n + j] = next_[i * n + k];
          }
        }
      }
    }
  }

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<double> dist_;
  std::vector<VertexId> next_;
};

// ---------------------------------------------------------------------------
// Points and the intrinsic metric

/// Endpoint identification: offsets at 0 or length compare equal to the vertex.
inline bool same_point(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b) {
  const auto va = g.vertex_at(a);
  const auto vb = g.vertex_at(b);
  if (va || vb) return va && vb && *va == *vb;
  return a.edge == b.edge && std::abs(a.offset - b.offset) <= kGeomTol;
}

inline void require_point(const MetricGraph& g, const GraphPoint& p) {
  if (!g.contains(p)) throw GraphError("point lies outside the graph");
}

inline double intrinsic_distance(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b) {
  require_point(g, a);
  require_point(g, b);
  const Edge& ea = g.edge(a.edge);
  const Edge& eb = g.edge(b.edge);
  double best = kInf;
  if (a.edge == b.edge) best = std::abs(a.offset - b.offset);
  const std::pair<VertexId, double> ends_a[2] = {{ea.from, a.offset}, {ea.to, ea.length - a.offset}};
  const std::pair<VertexId, double> ends_b[2] = {{eb.from, b.offset}, {eb.to, eb.length - b.offset}};
  for (const auto& [ua, ca] : ends_a) {
    for (const auto& [ub, cb] : ends_b) {
      best = std::min(best, ca + g.vertex_distance(ua, ub) + cb);
    }
  }
  return std::max(best, 0.0);
}

/// A shortest route from a to b; the route's first edge contains a and its
/// last edge contains b. Equal points yield an empty route.
inline Route shortest_route(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b) {
  require_point(g, a);
  require_point(g, b);
  if (same_point(g, a, b)) return {};
  const Edge& ea = g.edge(a.edge);
  const Edge& eb = g.edge(b.edge);

  Route best;
  best.length = kInf;
  if (a.edge == b.edge) {
    best.edges = {a.edge};
    best.length = std::abs(a.offset - b.offset);
  }
  const std::pair<VertexId, double> ends_a[2] = {{ea.from, a.offset}, {ea.to, ea.length - a.offset}};
  const std::pair<VertexId, double> ends_b[2] = {{eb.from, b.offset}, {eb.to, eb.length - b.offset}};
  for (const auto& [ua, ca] : ends_a) {
    for (const auto& [ub, cb] : ends_b) {
      const double len = ca + g.vertex_distance(ua, ub) + cb;
      if (len < best.length - kGeomTol) {
        Route r;
        r.length = len;
        if (ca > kGeomTol) r.edges.push_back(a.edge);
        const auto path = g.vertex_path(ua, ub);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          r.edges.push_back(*g.edge_between(path[i], path[i + 1]));
        }
        if (cb > kGeomTol) r.edges.push_back(b.edge);
        if (r.edges.empty()) r.edges.push_back(a.edge);  // both on the same vertex
        best = std::move(r);
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Structural transforms

inline MetricGraph scale(const MetricGraph& g, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw GraphError("scale factor must be positive");
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.length *= c;
  return MetricGraph::from_simple(g.vertex_names(), std::move(edges));
}

/// The leaf endpoint of e; when both ends are leaves, edge.to.
inline std::optional<VertexId> leaf_end(const MetricGraph& g, EdgeId e) {
  const Edge& edge = g.edge(e);
  if (g.is_leaf(edge.to)) return edge.to;
  if (g.is_leaf(edge.from)) return edge.from;
  return std::nullopt;
}

inline MetricGraph shorten_leaf_edge(const MetricGraph& g, EdgeId e, double new_length) {
  if (e >= g.edge_count()) throw GraphError("edge index out of range");
  if (!leaf_end(g, e)) {
    throw GraphError("edge '" + g.edge(e).id + "' is not incident to a leaf");
  }
  if (!(new_length > 0.0) || !(new_length < g.edge(e).length)) {
    throw GraphError("new length must lie strictly between 0 and the current length");
  }
  std::vector<Edge> edges = g.edges();
  edges[e].length = new_length;
  return MetricGraph::from_simple(g.vertex_names(), std::move(edges));
}

inline double total_length(const MetricGraph& g) { return g.total_length(); }

// ---------------------------------------------------------------------------
// Double-tree walk

namespace detail {

inline std::vector<WalkLeg> dfs_cover(const MetricGraph& g, VertexId root) {
  std::vector<WalkLeg> legs;
  std::vector<bool> visited(g.vertex_count(), false);
  std::vector<bool> used(g.edge_count(), false);
  auto leg = [&](EdgeId e, VertexId from, VertexId to) {
    legs.push_back({e, g.vertex_offset(e, from), g.vertex_offset(e, to)});
  };

  struct Frame {
    VertexId v;
    std::size_t next;
    std::optional<EdgeId> parent;
  };
  std::vector<Frame> stack{{root, 0, std::nullopt}};
  visited[root] = true;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto& inc = g.incident(top.v);
    if (top.next == inc.size()) {
      if (top.parent) {
        const VertexId up = g.edge(*top.parent).other(top.v);
        leg(*top.parent, top.v, up);
      }
      stack.pop_back();
      continue;
    }
    const EdgeId e = inc[top.next++];
    if (used[e]) continue;
    used[e] = true;
    const VertexId u = top.v;
    const VertexId w = g.edge(e).other(u);
    leg(e, u, w);
    if (!visited[w]) {
      visited[w] = true;
      stack.push_back({w, 0, e});
    } else {
      leg(e, w, u);  // non-tree edge: out-and-back detour
    }
  }

  // Drop the trailing return legs that only re-traverse covered edges.
  std::vector<int> cover(g.edge_count(), 0);
  for (const auto& l : legs) ++cover[l.edge];
  while (!legs.empty() && cover[legs.back().edge] > 1) {
    --cover[legs.back().edge];
    legs.pop_back();
  }
  return legs;
}

}  // namespace detail

/// Walk from `start` that traverses every edge, of length at most 2 * total length.
inline Walk double_tree_walk(const MetricGraph& g, const GraphPoint& start) {
  require_point(g, start);
  Walk walk;
  walk.start = start;
  if (auto v = g.vertex_at(start)) {
    walk.legs = detail::dfs_cover(g, *v);
    return walk;
  }
  // Interior start: split the edge there, walk the split graph, map back.
  const EdgeId split = start.edge;
  const double x = start.offset;
  const Edge& orig = g.edge(split);
  std::vector<std::string> names = g.vertex_names();
  names.push_back("#start");
  const VertexId mid = names.size() - 1;
  std::vector<Edge> edges = g.edges();
  edges[split] = {orig.id + "#a", orig.from, mid, x};
  edges.push_back({orig.id + "#b", mid, orig.to, orig.length - x});
  const EdgeId tail = edges.size() - 1;
  const MetricGraph split_graph = MetricGraph::from_simple(std::move(names), std::move(edges));
  for (const auto& leg : detail::dfs_cover(split_graph, mid)) {
    if (leg.edge == tail) {
      walk.legs.push_back({split, x + leg.from_offset, x + leg.to_offset});
    } else {
      walk.legs.push_back(leg);
    }
  }
  return walk;
}

// ---------------------------------------------------------------------------
// Discretization

struct DiscretizedGraph {
  struct Neighbor {
    std::size_t node;
    double distance;
  };

  double h = 0.0;
  double max_spacing = 0.0;
  /// Node i sits at points[i]; the first vertex_count nodes are the vertices.
  std::vector<GraphPoint> points;
  std::vector<std::vector<Neighbor>> adjacency;
  /// Node ids along each edge from its `from` vertex to its `to` vertex.
  std::vector<std::vector<std::size_t>> edge_nodes;
  std::size_t vertex_count = 0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] bool is_vertex(std::size_t node) const { return node < vertex_count; }
};

inline DiscretizedGraph discretize(const MetricGraph& g, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw GraphError("resolution h must be positive");
  DiscretizedGraph d;
  d.h = h;
  d.vertex_count = g.vertex_count();
  for (VertexId v = 0; v < g.vertex_count(); ++v) d.points.push_back(g.vertex_point(v));
  d.adjacency.resize(g.vertex_count());
  d.edge_nodes.resize(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    const auto intervals =
        static_cast<std::size_t>(std::max(1.0, std::ceil(edge.length / h - 1e-12)));
    const double spacing = edge.length / static_cast<double>(intervals);
    d.max_spacing = std::max(d.max_spacing, spacing);
    auto& nodes = d.edge_nodes[e];
    nodes.push_back(edge.from);
    for (std::size_t i = 1; i < intervals; ++i) {
      nodes.push_back(d.points.size());
      d.points.push_back({e, spacing * static_cast<double>(i)});
      d.adjacency.emplace_back();
    }
    nodes.push_back(edge.to);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      // Exact sub-edge length from the offsets; the last piece ends at length.
      const double a = (i == 0) ? 0.0 : d.points[nodes[i]].offset;
      const double b = (i + 2 == nodes.size()) ? edge.length : d.points[nodes[i + 1]].offset;
      d.adjacency[nodes[i]].push_back({nodes[i + 1], b - a});
      d.adjacency[nodes[i + 1]].push_back({nodes[i], b - a});
    }
  }
  return d;
}

}  // namespace copsrobber
