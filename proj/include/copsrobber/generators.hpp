// generators.hpp - standard graph families and random instances.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "copsrobber/metric_graph.hpp"

namespace copsrobber {

namespace detail {
inline std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}
}  // namespace detail

/// Path with `edges` edges of equal length, total length `total`.
inline MetricGraph path_graph(std::size_t edges, double total = 1.0) {
  if (edges == 0) throw GraphError("path needs at least one edge");
  auto names = detail::numbered("p", edges + 1);
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i < edges; ++i) {
    specs.push_back({"e" + std::to_string(i), names[i], names[i + 1],
                     total / static_cast<double>(edges)});
  }
  return MetricGraph::build(names, specs);
}

/// Cycle of circumference `total` split into `edges` >= 3 equal edges.
inline MetricGraph cycle_graph(std::size_t edges = 3, double total = 1.0) {
  if (edges < 3) throw GraphError("cycle needs at least three edges");
  auto names = detail::numbered("c", edges);
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i < edges; ++i) {
    specs.push_back({"e" + std::to_string(i), names[i], names[(i + 1) % edges],
                     total / static_cast<double>(edges)});
  }
  return MetricGraph::build(names, specs);
}

/// Star with centre "o" and leaves "v1".."vk".
inline MetricGraph star_graph(const std::vector<double>& lengths) {
  std::vector<std::string> names{"o"};
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    names.push_back("v" + std::to_string(i + 1));
    specs.push_back({"a" + std::to_string(i + 1), "o", names.back(), lengths[i]});
  }
  return MetricGraph::build(names, specs);
}

inline MetricGraph star_graph(std::size_t k, double length = 1.0) {
  return star_graph(std::vector<double>(k, length));
}

/// Comb B_k: backbone v1..vk, tooth u_i hanging from v_i, all edges `length`.
inline MetricGraph comb_graph(std::size_t k, double length = 1.0) {
  std::vector<std::string> names;
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 1; i <= k; ++i) {
    names.push_back("v" + std::to_string(i));
    names.push_back("u" + std::to_string(i));
    specs.push_back({"t" + std::to_string(i), names[names.size() - 2], names.back(), length});
    if (i > 1) {
      specs.push_back({"b" + std::to_string(i - 1), "v" + std::to_string(i - 1),
                       "v" + std::to_string(i), length});
    }
  }
  return MetricGraph::build(names, specs);
}

/// Random connected simple graph: a random tree plus `extra` chords, lengths
/// uniform in [min_len, max_len].
inline MetricGraph random_connected_graph(std::mt19937_64& rng, std::size_t vertices,
                                          std::size_t extra, double min_len = 0.2,
                                          double max_len = 1.0) {
  if (vertices < 2) throw GraphError("random graph needs at least two vertices");
  std::uniform_real_distribution<double> len(min_len, max_len);
  auto names = detail::numbered("r", vertices);
  std::vector<EdgeSpec> specs;
  std::vector<std::vector<bool>> used(vertices, std::vector<bool>(vertices, false));
  for (std::size_t v = 1; v < vertices; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    const std::size_t u = pick(rng);
    used[u][v] = used[v][u] = true;
    specs.push_back({"e" + std::to_string(specs.size()), names[u], names[v], len(rng)});
  }
  std::uniform_int_distribution<std::size_t> any(0, vertices - 1);
  for (std::size_t tries = 0, added = 0; added < extra && tries < 50 * (extra + 1); ++tries) {
    const std::size_t u = any(rng);
    const std::size_t v = any(rng);
    if (u == v || used[u][v]) continue;
    used[u][v] = used[v][u] = true;
    specs.push_back({"e" + std::to_string(specs.size()), names[u], names[v], len(rng)});
    ++added;
  }
  return MetricGraph::build(names, specs);
}

}  // namespace copsrobber
