// selftest.hpp - random instances and the verifier/oracle agreement run.
#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "copsrobber/generators.hpp"
#include "copsrobber/trajectory.hpp"
#include "copsrobber/verifier.hpp"

namespace copsrobber {

inline GraphPoint random_point(const MetricGraph& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<EdgeId> pick(0, g.edge_count() - 1);
  const EdgeId e = pick(rng);
  std::uniform_real_distribution<double> off(0.0, g.edge(e).length);
  return {e, off(rng)};
}

/// Random moves and pauses at speed s lasting at least `horizon`.
inline TimedPath random_cop_path(const GraphPtr& g, std::mt19937_64& rng, double s,
                                 double horizon) {
  PathBuilder b(g, random_point(*g, rng), s);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  while (b.now() < horizon) {
    if (coin(rng) < 0.25) {
      b.wait(0.3 * horizon * coin(rng));
    } else {
      b.go_to(random_point(*g, rng));
    }
  }
  return b.build();
}

struct OracleInstance {
  TimedPath cop;
  VerifierParams params;
};

/// Small random instance inside the enumeration oracle's limits.
inline OracleInstance random_oracle_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> family(0, 3);
  for (;;) {
    MetricGraph base = [&] {
      switch (family(rng)) {
        case 0: return path_graph(1 + rng() % 3);
        case 1: return star_graph({0.5 + unit(rng), 0.5 + unit(rng), 0.5 + unit(rng)});
        case 2: return cycle_graph(3);
        default: return random_connected_graph(rng, 4, rng() % 2, 0.4, 1.0);
      }
    }();
    const auto g = std::make_shared<const MetricGraph>(scale(base, 4.0 + 6.0 * unit(rng)));
    const double h = g->total_length() / (4.0 + 6.0 * unit(rng));
    if (discretize(*g, h).size() > 12) continue;
    const double s = 0.3 + 2.7 * unit(rng);
    const TimedPath cop = random_cop_path(g, rng, s, 1.0 + 6.0 * unit(rng));
    const auto steps = static_cast<double>(1 + rng() % 12);
    VerifierParams p;
    p.h = h;
    p.dt = cop.duration() / steps;
    p.eps = VerifierParams::eps_floor(p.h, p.dt) * (1.0 + 0.5 * unit(rng));
    if (TimeGrid(cop.duration(), p.dt).steps() > 12) continue;
    return {cop, p};
  }
}

struct AgreementReport {
  std::size_t instances = 0;
  std::size_t disagreements = 0;
  std::size_t survivals = 0;
};

/// Runs verify and the enumeration oracle on `count` seeded random instances.
inline AgreementReport oracle_agreement(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  AgreementReport rep;
  for (std::size_t i = 0; i < count; ++i) {
    const auto inst = random_oracle_instance(rng);
    const auto v = verify(inst.cop, inst.params, false);
    const auto o = brute_force_oracle(inst.cop, inst.params);
    ++rep.instances;
    if (v.verdict != o.verdict || v.time_bound != o.time_bound) ++rep.disagreements;
    if (v.verdict == Verdict::kSurvival) ++rep.survivals;
  }
  return rep;
}

}  // namespace copsrobber
