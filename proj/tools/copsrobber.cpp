// copsrobber - command-line front end: graph files, strategy generation,
// verification, frontier tables, SVG export and the oracle self-test.
//
// Exit codes: 0 capture / success, 1 usage, 2 invalid input or parameters,
// 3 survival, 4 strategy construction or evidence error.

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "copsrobber/critical_speed.hpp"
#include "copsrobber/generators.hpp"
#include "copsrobber/io.hpp"
#include "copsrobber/selftest.hpp"
#include "copsrobber/strategies.hpp"
#include "copsrobber/svg.hpp"
#include "copsrobber/verifier.hpp"

using namespace copsrobber;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitSurvival = 3;
constexpr int kExitConstruction = 4;

struct CommandConfig {
  std::string graph;
  std::string strategy;
  std::string witness;
  std::string out;
  std::string kind;
  std::string family;
  std::string shape;
  double speed = 0.0;
  double delta = 1e-3;
  std::optional<double> h;
  std::optional<double> dt;
  std::optional<double> eps;
  std::vector<double> speeds;
  double s_low = 0.0;
  double s_high = 0.0;
  double tol = 0.01;
  double horizon = 10.0;
  std::size_t size = 3;
  double length = 1.0;
  std::uint64_t seed = 1;
  std::size_t count = 200;
};

GraphPtr load_graph(const std::string& path) {
  return std::make_shared<const MetricGraph>(graph_from_json(read_json_file(path)));
}

/// Unset resolution flags fall back to the verifier defaults.
VerifierParams resolve_params(const CommandConfig& c, const MetricGraph& g) {
  VerifierParams p = VerifierParams::defaults(g);
  if (c.h) {
    p.h = *c.h;
    p.dt = 20.0 * p.h;
  }
  if (c.dt) p.dt = *c.dt;
  p.eps = c.eps ? *c.eps : VerifierParams::eps_floor(p.h, p.dt);
  p.validate();
  return p;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_graph(const CommandConfig& c) {
  MetricGraph g = [&] {
    if (c.shape == "path") return path_graph(c.size, c.length);
    if (c.shape == "cycle") return cycle_graph(std::max<std::size_t>(c.size, 3), c.length);
    if (c.shape == "star") return star_graph(c.size, c.length);
    if (c.shape == "comb") return comb_graph(c.size, c.length);
    throw CLI::ValidationError("--shape", "expected path, cycle, star or comb");
  }();
  emit(c.out, graph_to_json(g).dump(2) + "\n");
  return kExitOk;
}

int cmd_generate(const CommandConfig& c) {
  const GraphPtr g = load_graph(c.graph);
  const auto family = parse_family(c.kind);
  if (!family) throw CLI::ValidationError("--kind", "unknown strategy kind '" + c.kind + "'");
  StrategyMeta meta{c.kind, {}, {}};
  TimedPath path;
  switch (*family) {
    case StrategyFamily::kStar: {
      auto st = star_strategy(g, c.speed, c.delta);
      meta.lambda = st.schedule.lambda;
      meta.truncation = c.delta;
      path = std::move(st.path);
      break;
    }
    case StrategyFamily::kComb: {
      auto cb = comb_strategy(g, c.speed, c.delta);
      meta.lambda = cb.lambda;
      meta.truncation = c.delta;
      path = std::move(cb.path);
      break;
    }
    case StrategyFamily::kFiniteness:
      meta.truncation = c.delta;
      path = finiteness_strategy(g, c.speed, c.delta);
      break;
    default:
      path = build_strategy(g, *family, c.speed, c.delta);
  }
  emit(c.out, trajectory_to_json(path, meta).dump(2) + "\n");
  std::cerr << "duration " << path.duration() << ", breakpoints " << path.breakpoints().size()
            << "\n";
  return kExitOk;
}

int cmd_verify(const CommandConfig& c) {
  const GraphPtr g = load_graph(c.graph);
  const TimedPath cop = trajectory_from_json(read_json_file(c.strategy), g);
  const VerifierParams p = resolve_params(c, *g);
  const VerifierResult r = verify(cop, p, true);
  emit(c.out, report_to_json(r).dump(2) + "\n");
  if (r.witness && !c.witness.empty()) {
    write_text_file(c.witness, trajectory_to_json(*r.witness, {"witness", {}, {}}).dump(2) + "\n");
  }
  std::cerr << to_string(r.verdict);
  if (r.time_bound) std::cerr << " by t = " << *r.time_bound;
  if (r.min_clearance) std::cerr << ", witness clearance " << *r.min_clearance;
  std::cerr << " (h = " << p.h << ", dt = " << p.dt << ", eps = " << p.eps << ")\n";
  return r.verdict == Verdict::kCapture ? kExitOk : kExitSurvival;
}

int cmd_frontier(const CommandConfig& c) {
  const GraphPtr g = load_graph(c.graph);
  const auto family = parse_family(c.family);
  if (!family) throw CLI::ValidationError("--family", "unknown family '" + c.family + "'");
  ProbeOptions opt;
  opt.params = resolve_params(c, *g);
  opt.delta = c.delta;
  opt.cycle_horizon = c.horizon;
  if (c.s_high > 0.0) {
    const SpeedBracket br = upper_bound_bisect(g, *family, c.s_low, c.s_high, c.tol, opt);
    Json j;
    j["family"] = to_string(br.family);
    j["lower"] = br.lower;
    j["upper"] = br.upper;
    j["lower_evidence"] =
        br.lower_evidence.refusal ? Json(*br.lower_evidence.refusal) : Json("survival");
    j["upper_time_bound"] = *br.upper_evidence.result->time_bound;
    j["params"] = params_to_json(br.params);
    j["probes"] = br.probes;
    j["note"] = "upper-bound evidence at the stated resolution";
    emit(c.out, j.dump(2) + "\n");
    return kExitOk;
  }
  if (c.speeds.empty()) throw CLI::ValidationError("--speeds", "give speeds or --s-high");
  const FrontierTable t = frontier_table(g, *family, c.speeds, opt);
  emit(c.out, frontier_to_csv(t));
  if (!t.capture_times_monotone()) std::cerr << "warning: capture times not monotone in s\n";
  return kExitOk;
}

int cmd_export_svg(const CommandConfig& c) {
  const GraphPtr g = load_graph(c.graph);
  const TimedPath cop = trajectory_from_json(read_json_file(c.strategy), g);
  std::optional<TimedPath> witness;
  if (!c.witness.empty()) witness = trajectory_from_json(read_json_file(c.witness), g);
  SvgOptions opt;
  opt.eps = c.eps;
  emit(c.out, export_svg(cop, witness, opt));
  return kExitOk;
}

int cmd_selftest(const CommandConfig& c) {
  const AgreementReport rep = oracle_agreement(c.seed, c.count);
  std::cout << "instances " << rep.instances << ", survivals " << rep.survivals
            << ", disagreements " << rep.disagreements << "\n";
  return rep.disagreements == 0 ? kExitOk : kExitConstruction;
}

void add_resolution(CLI::App* sub, CommandConfig& c) {
  sub->add_option("--h", c.h, "spatial resolution")->check(CLI::PositiveNumber);
  sub->add_option("--dt", c.dt, "time step")->check(CLI::PositiveNumber);
  sub->add_option("--eps", c.eps, "capture radius")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cop strategies and evasion checks on metric graphs"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  CommandConfig c;

  auto* graph = app.add_subcommand("graph", "write a standard graph file");
  graph->add_option("--shape", c.shape, "path, cycle, star or comb")->required();
  graph->add_option("--size", c.size, "edges (path, cycle), arms (star) or teeth (comb)");
  graph->add_option("--length", c.length, "edge length (total length for path and cycle)");
  graph->add_option("--out", c.out, "output file (default stdout)");

  auto* gen = app.add_subcommand("generate", "construct a cop strategy");
  gen->add_option("--graph", c.graph)->required();
  gen->add_option("--kind", c.kind, "star, comb, cycle, finiteness or sweep")->required();
  gen->add_option("--speed", c.speed)->required()->check(CLI::PositiveNumber);
  gen->add_option("--delta", c.delta, "truncation (first excursion duration)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--out", c.out);

  auto* ver = app.add_subcommand("verify", "check a strategy against all robbers");
  ver->add_option("--graph", c.graph)->required();
  ver->add_option("--strategy", c.strategy)->required();
  ver->add_option("--out", c.out, "report file (default stdout)");
  ver->add_option("--witness", c.witness, "witness trajectory file on survival");
  add_resolution(ver, c);

  auto* fr = app.add_subcommand("frontier", "verdicts across speeds or a bisection bracket");
  fr->add_option("--graph", c.graph)->required();
  fr->add_option("--family", c.family, "star, comb, cycle, finiteness or sweep")->required();
  fr->add_option("--speeds", c.speeds)->delimiter(',');
  fr->add_option("--s-low", c.s_low);
  fr->add_option("--s-high", c.s_high);
  fr->add_option("--tol", c.tol)->check(CLI::PositiveNumber);
  fr->add_option("--delta", c.delta)->check(CLI::PositiveNumber);
  fr->add_option("--horizon", c.horizon, "loop duration for cycle rows below the threshold");
  fr->add_option("--out", c.out);
  add_resolution(fr, c);

  auto* svg = app.add_subcommand("export-svg", "time-space diagram of a strategy");
  svg->add_option("--graph", c.graph)->required();
  svg->add_option("--strategy", c.strategy)->required();
  svg->add_option("--witness", c.witness);
  svg->add_option("--eps", c.eps, "shade the capture tube");
  svg->add_option("--out", c.out);

  auto* self = app.add_subcommand("selftest", "verifier versus enumeration oracle");
  self->add_option("--seed", c.seed);
  self->add_option("--count", c.count);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*graph) return cmd_graph(c);
    if (*gen) return cmd_generate(c);
    if (*ver) return cmd_verify(c);
    if (*fr) return cmd_frontier(c);
    if (*svg) return cmd_export_svg(c);
    if (*self) return cmd_selftest(c);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StrategyError& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return kExitConstruction;
  } catch (const EvidenceError& e) {
    std::cerr << "evidence error: " << e.what() << "\n";
    return kExitConstruction;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
