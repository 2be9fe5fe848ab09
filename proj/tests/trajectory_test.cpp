#include <gtest/gtest.h>

#include <memory>

#include "copsrobber/generators.hpp"
#include "copsrobber/trajectory.hpp"

using namespace copsrobber;

namespace {

GraphPtr share(MetricGraph g) { return std::make_shared<const MetricGraph>(std::move(g)); }

}  // namespace

TEST(TimedPath, EvaluateAlongPath) {
  const auto g = share(path_graph(1));
  const auto p = TimedPath::make(g, {{0.0, {0, 0.0}}, {10.0, {0, 1.0}}}, {{0}}, 0.1);
  EXPECT_NEAR(p.evaluate(5.0).offset, 0.5, 1e-12);
  EXPECT_NEAR(p.evaluate(10.0).offset, 1.0, 1e-12);
  EXPECT_THROW((void)p.evaluate(10.5), TrajectoryError);
}

TEST(TimedPath, RejectsBadInput) {
  const auto g = share(path_graph(1));
  // Too fast.
  EXPECT_THROW(TimedPath::make(g, {{0.0, {0, 0.0}}, {1.0, {0, 1.0}}}, {{0}}, 0.5),
               TrajectoryError);
  // Non-increasing times.
  EXPECT_THROW(TimedPath::make(g, {{0.0, {0, 0.0}}, {0.0, {0, 0.5}}}, {{0}}, 5.0),
               TrajectoryError);
  // Does not start at zero.
  EXPECT_THROW(TimedPath::make(g, {{1.0, {0, 0.0}}, {2.0, {0, 0.5}}}, {{0}}, 5.0),
               TrajectoryError);
}

TEST(TimedPath, RouteThroughVertex) {
  const auto g = share(star_graph(3));
  PathBuilder b(g, {0, 1.0}, 1.0);
  b.go_to({1, 1.0});
  const TimedPath p = b.build();
  EXPECT_NEAR(p.duration(), 2.0, 1e-12);
  EXPECT_TRUE(same_point(*g, p.evaluate(1.0), g->vertex_point(0)));
  EXPECT_NEAR(p.evaluate(1.5).offset, 0.5, 1e-12);
  EXPECT_EQ(p.evaluate(1.5).edge, 1u);
}

TEST(TimedPath, SweptIntervals) {
  const auto g = share(path_graph(2));
  PathBuilder b(g, {0, 0.0}, 1.0);
  b.go_to({1, 0.5});
  const auto p = b.build();
  const auto legs = p.swept(0.25, 0.75);
  double total = 0.0;
  for (const auto& l : legs) total += l.length();
  EXPECT_NEAR(total, 0.5, 1e-12);
}

TEST(Variation, ProfileAndLipschitz) {
  const auto g = share(path_graph(1));
  PathBuilder b(g, {0, 0.0}, 2.0);
  b.go_along(0, 1.0).wait(1.0).go_along(0, 0.0);
  const auto p = b.build();
  EXPECT_TRUE(check_lipschitz(p, 2.0));
  EXPECT_FALSE(check_lipschitz(p, 1.9));
  EXPECT_NEAR(total_variation(p), 2.0, 1e-12);
  const auto prof = variation_profile(p);
  EXPECT_NEAR(prof.at(1.0), 1.0, 1e-12);
  EXPECT_NEAR(prof.at(1.75), 1.5, 1e-12);
}

TEST(Reparameterize, RemovesIdles) {
  const auto g = share(path_graph(1));
  PathBuilder b(g, {0, 0.0}, 1.0);
  b.go_along(0, 0.5).wait(3.0).go_along(0, 1.0);
  const auto p = b.build();
  const auto q = reparameterize_max_speed(p, 1.0);
  EXPECT_NEAR(q.duration(), 1.0, 1e-12);
  EXPECT_NEAR(total_variation(q), q.speed() * q.duration(), 1e-9);
  EXPECT_NEAR(q.evaluate(0.75).offset, 0.75, 1e-12);
}

TEST(Transfer, ScaleMultipliesTimes) {
  const auto g = share(star_graph(3));
  PathBuilder b(g, g->vertex_point(0), 2.0);
  b.go_to(g->vertex_point(1)).go_to(g->vertex_point(2));
  const auto p = b.build();
  const auto q = transfer_scale(p, 3.0);
  EXPECT_NEAR(q.duration(), 3.0 * p.duration(), 1e-12);
  EXPECT_NEAR(q.graph().total_length(), 9.0, 1e-12);
  EXPECT_NEAR(q.evaluate(1.5).offset, 3.0 * p.evaluate(0.5).offset, 1e-12);
}

TEST(Transfer, ShortenClampsLeafExcursion) {
  const auto g = share(star_graph(3));
  PathBuilder b(g, g->vertex_point(0), 1.0);
  b.go_to(g->vertex_point(1)).go_to(g->vertex_point(2));
  const auto p = b.build();
  const auto q = transfer_shorten(p, 0, 0.4);
  EXPECT_NEAR(q.duration(), p.duration(), 1e-12);
  EXPECT_TRUE(check_lipschitz(q, 1.0));
  // The cop waits at the shortened leaf while the original goes further out.
  EXPECT_NEAR(q.evaluate(0.7).offset, 0.4, 1e-12);
  EXPECT_NEAR(q.evaluate(1.7).offset, 0.3, 1e-12);
  EXPECT_TRUE(same_point(q.graph(), q.evaluate(3.0), q.graph().vertex_point(2)));
}

TEST(Transfer, InsertPauseDelaysTail) {
  const auto g = share(path_graph(2));
  PathBuilder b(g, g->vertex_point(0), 1.0);
  b.go_to(g->vertex_point(1)).go_to(g->vertex_point(2));
  const auto p = b.build();
  const auto q = insert_pause(p, 1, 0.25);
  EXPECT_EQ(q.breakpoints().size(), p.breakpoints().size() + 1);
  EXPECT_NEAR(q.duration(), p.duration() + 0.25, 1e-12);
  EXPECT_NEAR(q.evaluate(0.6).offset, p.evaluate(0.5).offset, 1e-12);
  EXPECT_EQ(q.evaluate(0.85).edge, p.evaluate(0.6).edge);
  EXPECT_NEAR(q.evaluate(0.85).offset, p.evaluate(0.6).offset, 1e-12);
  EXPECT_THROW(insert_pause(p, 5, 0.1), TrajectoryError);
  EXPECT_THROW(insert_pause(p, 0, 0.0), TrajectoryError);
}
