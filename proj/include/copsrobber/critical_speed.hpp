// critical_speed.hpp - upper-bound evidence for the critical speed: bisection
// over strategy families and per-speed frontier tables.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "copsrobber/strategies.hpp"
#include "copsrobber/verifier.hpp"

namespace copsrobber {

class EvidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StrategyFamily { kStar, kComb, kCycle, kFiniteness, kSweep };

inline const char* to_string(StrategyFamily f) {
  switch (f) {
    case StrategyFamily::kStar: return "star";
    case StrategyFamily::kComb: return "comb";
    case StrategyFamily::kCycle: return "cycle";
    case StrategyFamily::kFiniteness: return "finiteness";
    case StrategyFamily::kSweep: return "sweep";
  }
  return "unknown";
}

inline std::optional<StrategyFamily> parse_family(const std::string& name) {
  for (auto f : {StrategyFamily::kStar, StrategyFamily::kComb, StrategyFamily::kCycle,
                 StrategyFamily::kFiniteness, StrategyFamily::kSweep}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

/// Constructs the family's strategy at speed s; throws StrategyError below
/// the family's threshold.
inline TimedPath build_strategy(const GraphPtr& g, StrategyFamily f, double s, double delta) {
  switch (f) {
    case StrategyFamily::kStar: return star_strategy(g, s, delta).path;
    case StrategyFamily::kComb: return comb_strategy(g, s, delta).path;
    case StrategyFamily::kCycle: return cycle_strategy(g, s);
    case StrategyFamily::kFiniteness: return finiteness_strategy(g, s, delta);
    case StrategyFamily::kSweep: return sweep_strategy(g, s);
  }
  throw StrategyError("unknown strategy family");
}

struct Probe {
  double s = 0.0;
  std::string strategy;                // family actually run
  std::optional<std::string> refusal;  // constructor message when not built
  std::optional<VerifierResult> result;

  [[nodiscard]] bool captures() const {
    return result && result->verdict == Verdict::kCapture;
  }
};

struct ProbeOptions {
  VerifierParams params;
  double delta = 1e-3;
  /// Below the family threshold, run a fallback (double-tree sweep, or a
  /// loop of this duration on cycles) instead of recording a refusal.
  bool fallback = false;
  double cycle_horizon = 10.0;
};

inline Probe probe_speed(const GraphPtr& g, StrategyFamily f, double s, const ProbeOptions& opt) {
  Probe pr;
  pr.s = s;
  pr.strategy = to_string(f);
  std::optional<TimedPath> path;
  try {
    path = build_strategy(g, f, s, opt.delta);
  } catch (const StrategyError& e) {
    pr.refusal = e.what();
    if (!opt.fallback) return pr;
    if (f == StrategyFamily::kCycle) {
      pr.strategy = "cycle-loop";
      path = cycle_loop(g, s, opt.cycle_horizon);
    } else {
      pr.strategy = "sweep";
      path = sweep_strategy(g, s);
    }
  }
  pr.result = verify(*path, opt.params, true);
  return pr;
}

struct SpeedBracket {
  double lower = 0.0;  // failing: constructor refusal or verified survival
  double upper = 0.0;  // verified capture
  StrategyFamily family = StrategyFamily::kSweep;
  VerifierParams params;
  double tolerance = 0.0;
  Probe lower_evidence;
  Probe upper_evidence;
  std::size_t probes = 0;
};

/// Bisection on s; every probe is constructed and verified on its own.
inline SpeedBracket upper_bound_bisect(const GraphPtr& g, StrategyFamily f, double s_low,
                                       double s_high, double tol, const ProbeOptions& opt) {
  if (!(s_low < s_high) || !(tol > 0.0)) {
    throw EvidenceError("bisection needs s_low < s_high and tol > 0");
  }
  ProbeOptions strict = opt;
  strict.fallback = false;
  SpeedBracket br;
  br.family = f;
  br.params = opt.params;
  br.tolerance = tol;
  br.upper_evidence = probe_speed(g, f, s_high, strict);
  br.lower_evidence = probe_speed(g, f, s_low, strict);
  br.probes = 2;
  if (!br.upper_evidence.captures()) {
    throw EvidenceError("strategy at s_high = " + detail::fmt_num(s_high) +
                        " does not capture; raise s_high");
  }
  if (br.lower_evidence.captures()) {
    throw EvidenceError("strategy at s_low = " + detail::fmt_num(s_low) +
                        " already captures; lower s_low");
  }
  br.lower = s_low;
  br.upper = s_high;
  while (br.upper - br.lower > tol) {
    const double mid = 0.5 * (br.lower + br.upper);
    Probe pr = probe_speed(g, f, mid, strict);
    ++br.probes;
    if (pr.captures()) {
      br.upper = mid;
      br.upper_evidence = std::move(pr);
    } else {
      br.lower = mid;
      br.lower_evidence = std::move(pr);
    }
  }
  return br;
}

struct FrontierRow {
  double s = 0.0;
  Verdict verdict = Verdict::kSurvival;
  std::optional<double> time_bound;
  std::optional<double> clearance;
  std::string strategy;
};

struct FrontierTable {
  StrategyFamily family = StrategyFamily::kSweep;
  VerifierParams params;
  std::vector<FrontierRow> rows;

  /// Capture times do not increase with s across capture rows.
  [[nodiscard]] bool capture_times_monotone() const {
    std::optional<double> prev;
    for (const auto& r : rows) {
      if (r.verdict != Verdict::kCapture) continue;
      if (prev && *r.time_bound > *prev + 1e-12) return false;
      prev = r.time_bound;
    }
    return true;
  }
};

/// One verified row per speed, in the order given. Speeds below the family
/// threshold use the fallback strategy.
inline FrontierTable frontier_table(const GraphPtr& g, StrategyFamily f,
                                    const std::vector<double>& speeds, ProbeOptions opt) {
  opt.fallback = true;
  FrontierTable table;
  table.family = f;
  table.params = opt.params;
  for (double s : speeds) {
    const Probe pr = probe_speed(g, f, s, opt);
    FrontierRow row;
    row.s = s;
    row.strategy = pr.strategy;
    row.verdict = pr.result->verdict;
    row.time_bound = pr.result->time_bound;
    row.clearance = pr.result->min_clearance;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace copsrobber
