// io.hpp - JSON and CSV formats for graphs, trajectories, reports and
// frontier tables.
#pragma once

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "copsrobber/critical_speed.hpp"
#include "copsrobber/metric_graph.hpp"
#include "copsrobber/trajectory.hpp"
#include "copsrobber/verifier.hpp"

namespace copsrobber {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StrategyMeta {
  std::string kind;
  std::optional<double> lambda;
  std::optional<double> truncation;
};

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// Graphs

inline Json graph_to_json(const MetricGraph& g) {
  Json j;
  j["vertices"] = g.vertex_names();
  j["edges"] = Json::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back({{"id", e.id},
                          {"from", g.vertex_name(e.from)},
                          {"to", g.vertex_name(e.to)},
                          {"length", e.length}});
  }
  return j;
}

inline MetricGraph graph_from_json(const Json& j) {
  try {
    std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
    std::vector<EdgeSpec> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at("id").get<std::string>(), e.at("from").get<std::string>(),
                       e.at("to").get<std::string>(), e.at("length").get<double>()});
    }
    return MetricGraph::build(vertices, edges);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed graph JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Trajectories

inline Json trajectory_to_json(const TimedPath& p, const StrategyMeta& meta = {}) {
  const MetricGraph& g = p.graph();
  Json j;
  j["speed"] = p.speed();
  j["breakpoints"] = Json::array();
  for (const auto& b : p.breakpoints()) {
    j["breakpoints"].push_back({{"t", b.t}, {"edge", g.edge(b.p.edge).id}, {"offset", b.p.offset}});
  }
  j["routes"] = Json::array();
  for (const auto& r : p.routes()) {
    Json ids = Json::array();
    for (EdgeId e : r) ids.push_back(g.edge(e).id);
    j["routes"].push_back(ids);
  }
  Json m;
  m["kind"] = meta.kind.empty() ? "custom" : meta.kind;
  m["lambda"] = meta.lambda ? Json(*meta.lambda) : Json(nullptr);
  m["truncation"] = meta.truncation ? Json(*meta.truncation) : Json(nullptr);
  j["metadata"] = m;
  return j;
}

inline TimedPath trajectory_from_json(const Json& j, const GraphPtr& g) {
  auto edge_id = [&](const Json& v) {
    const auto id = v.get<std::string>();
    const auto e = g->find_edge(id);
    if (!e) throw FormatError("trajectory references unknown edge '" + id + "'");
    return *e;
  };
  try {
    std::vector<Breakpoint> bps;
    for (const auto& b : j.at("breakpoints")) {
      bps.push_back({b.at("t").get<double>(), {edge_id(b.at("edge")), b.at("offset").get<double>()}});
    }
    if (bps.empty()) throw FormatError("trajectory has no breakpoints");
    std::vector<std::vector<EdgeId>> routes;
    for (const auto& r : j.at("routes")) {
      std::vector<EdgeId> route;
      for (const auto& e : r) route.push_back(edge_id(e));
      routes.push_back(std::move(route));
    }
    return TimedPath::make(g, std::move(bps), std::move(routes), j.at("speed").get<double>());
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed trajectory JSON: ") + e.what());
  } catch (const TrajectoryError& e) {
    throw FormatError(std::string("invalid trajectory: ") + e.what());
  }
}

inline StrategyMeta meta_from_json(const Json& j) {
  StrategyMeta m;
  if (!j.contains("metadata")) return m;
  const auto& md = j["metadata"];
  if (md.contains("kind") && md["kind"].is_string()) m.kind = md["kind"].get<std::string>();
  if (md.contains("lambda") && md["lambda"].is_number()) m.lambda = md["lambda"].get<double>();
  if (md.contains("truncation") && md["truncation"].is_number()) {
    m.truncation = md["truncation"].get<double>();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Reports and tables

inline Json params_to_json(const VerifierParams& p) {
  return {{"h", p.h}, {"dt", p.dt}, {"eps", p.eps}};
}

inline Json report_to_json(const VerifierResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["time_bound"] = r.time_bound ? Json(*r.time_bound) : Json(nullptr);
  j["params"] = params_to_json(r.params);
  j["witness"] = r.witness ? trajectory_to_json(*r.witness, {"witness", {}, {}}) : Json(nullptr);
  j["min_clearance"] = r.min_clearance ? Json(*r.min_clearance) : Json(nullptr);
  return j;
}

namespace detail {
inline std::string csv_num(std::optional<double> v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << *v;
  return os.str();
}
}  // namespace detail

inline std::string frontier_to_csv(const FrontierTable& t) {
  std::ostringstream os;
  os << "s,verdict,time_bound,clearance,h,dt,eps,strategy\n";
  for (const auto& r : t.rows) {
    os << detail::csv_num(r.s) << ',' << to_string(r.verdict) << ','
       << detail::csv_num(r.time_bound) << ',' << detail::csv_num(r.clearance) << ','
       << detail::csv_num(t.params.h) << ',' << detail::csv_num(t.params.dt) << ','
       << detail::csv_num(t.params.eps) << ',' << r.strategy << '\n';
  }
  return os.str();
}

inline Json frontier_to_json(const FrontierTable& t) {
  Json j;
  j["family"] = to_string(t.family);
  j["params"] = params_to_json(t.params);
  j["rows"] = Json::array();
  for (const auto& r : t.rows) {
    j["rows"].push_back({{"s", r.s},
                         {"verdict", to_string(r.verdict)},
                         {"time_bound", r.time_bound ? Json(*r.time_bound) : Json(nullptr)},
                         {"clearance", r.clearance ? Json(*r.clearance) : Json(nullptr)},
                         {"strategy", r.strategy}});
  }
  return j;
}

}  // namespace copsrobber
