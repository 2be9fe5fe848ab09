#include <gtest/gtest.h>

#include "copsrobber/generators.hpp"
#include "copsrobber/io.hpp"
#include "copsrobber/strategies.hpp"
#include "copsrobber/svg.hpp"
#include "test_support.hpp"

using namespace copsrobber;
using testing_support::share;

TEST(GraphJson, RoundTrip) {
  const auto g = comb_graph(3);
  const auto back = graph_from_json(Json::parse(graph_to_json(g).dump()));
  ASSERT_EQ(back.edge_count(), g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    EXPECT_EQ(back.edge(e).id, g.edge(e).id);
    EXPECT_EQ(back.edge(e).length, g.edge(e).length);
  }
}

TEST(GraphJson, Malformed) {
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices": ["a"]})")), FormatError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices": ["a","b"], "edges": [{"id": "e"}]})")),
               FormatError);
}

TEST(TrajectoryJson, RoundTripIsBitIdentical) {
  const auto g = share(star_graph(3));
  const auto st = star_strategy(g, 3.5, 1e-3);
  const Json j = trajectory_to_json(st.path, {"star", st.schedule.lambda, 1e-3});
  const auto back = trajectory_from_json(Json::parse(j.dump()), g);
  ASSERT_EQ(back.breakpoints().size(), st.path.breakpoints().size());
  for (std::size_t i = 0; i < back.breakpoints().size(); ++i) {
    EXPECT_EQ(back.breakpoints()[i].t, st.path.breakpoints()[i].t);
    EXPECT_EQ(back.breakpoints()[i].p.offset, st.path.breakpoints()[i].p.offset);
  }
  EXPECT_EQ(back.routes(), st.path.routes());
  const auto meta = meta_from_json(j);
  EXPECT_EQ(meta.kind, "star");
  EXPECT_EQ(*meta.lambda, st.schedule.lambda);
  const VerifierParams p{2e-3, 0.04, 0.084};
  EXPECT_EQ(verify(back, p, false).time_bound, verify(st.path, p, false).time_bound);
}

TEST(TrajectoryJson, Malformed) {
  const auto g = share(path_graph(1));
  EXPECT_THROW(trajectory_from_json(Json::parse(R"({"speed": 1})"), g), FormatError);
  EXPECT_THROW(trajectory_from_json(
                   Json::parse(R"({"speed": 1, "breakpoints": [{"t": 0, "edge": "zz", "offset": 0}],
                                   "routes": []})"),
                   g),
               FormatError);
  // Too fast for the declared speed.
  EXPECT_THROW(trajectory_from_json(Json::parse(R"({"speed": 0.1, "breakpoints":
      [{"t": 0, "edge": "e0", "offset": 0}, {"t": 1, "edge": "e0", "offset": 1}],
      "routes": [["e0"]]})"),
                                    g),
               FormatError);
}

TEST(Report, Fields) {
  const auto g = share(cycle_graph(3));
  const auto r = verify(cycle_loop(g, 1.0, 2.0), {0.01, 0.01, 0.04});
  const Json j = report_to_json(r);
  EXPECT_EQ(j["verdict"], "survival");
  EXPECT_TRUE(j["time_bound"].is_null());
  EXPECT_EQ(j["params"]["eps"], 0.04);
  EXPECT_TRUE(j["witness"].is_object());
  EXPECT_TRUE(j["min_clearance"].is_number());
}

TEST(Frontier, CsvColumns) {
  FrontierTable t;
  t.params = {0.01, 0.02, 0.06};
  t.rows.push_back({1.5, Verdict::kCapture, 2.0, std::nullopt, "cycle"});
  const auto csv = frontier_to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "s,verdict,time_bound,clearance,h,dt,eps,strategy");
  EXPECT_NE(csv.find("1.5,capture,2,,0.01"), std::string::npos);
}

TEST(Svg, DeterministicAndRejectsEmpty) {
  const auto g = share(star_graph(3));
  const auto st = star_strategy(g, 3.5, 1e-2);
  SvgOptions opt;
  opt.eps = 0.05;
  const auto a = export_svg(st.path, std::nullopt, opt);
  EXPECT_EQ(a, export_svg(st.path, std::nullopt, opt));
  EXPECT_NE(a.find("<svg"), std::string::npos);
  EXPECT_NE(a.find("a1"), std::string::npos);
  PathBuilder b(g, g->vertex_point(0), 1.0);
  EXPECT_THROW(export_svg(b.build()), TrajectoryError);
}
