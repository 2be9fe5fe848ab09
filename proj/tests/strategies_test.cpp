#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "copsrobber/generators.hpp"
#include "copsrobber/strategies.hpp"

using namespace copsrobber;

namespace {

GraphPtr share(MetricGraph g) { return std::make_shared<const MetricGraph>(std::move(g)); }

double poly(int k, double x) {
  double sum = 0.0;
  for (int j = 1; j <= k - 2; ++j) sum += std::pow(x, j);
  return sum;
}

}  // namespace

TEST(LambdaRoot, ClosedForms) {
  EXPECT_NEAR(lambda_root(3, 5.0), 2.0, 1e-12);
  EXPECT_NEAR(lambda_root(4, 7.0), (-1.0 + std::sqrt(13.0)) / 2.0, 1e-12);
  EXPECT_NEAR(poly(5, lambda_root(5, 8.0)), 3.5, 1e-12);
  EXPECT_LT(lambda_root(4, 5.0 + 1e-6) - 1.0, 1e-3);
  EXPECT_THROW(lambda_root(4, 5.0), StrategyError);
  EXPECT_THROW(lambda_root(2, 5.0), StrategyError);
}

TEST(Cascade, MatchesSteadyUpdate) {
  // k = 4 arms in the cascade is k - 1 = 3; with steady initial radii the
  // explored arm ends at (s-1)/2 * d and the others shrink by d.
  const double s = 6.0;
  const double lam = lambda_root(4, s);
  const double d0 = 1e-3;
  std::vector<CascadeArm> arms(3, CascadeArm{0, 1.0, true});
  for (std::size_t i = 0; i < 3; ++i) arms[i].edge = i;
  const auto init = steady_initial_state(3, 1, lam, d0);
  EXPECT_DOUBLE_EQ(init.radius[0], 0.0);
  EXPECT_NEAR(init.radius[1], d0, 1e-15);
  EXPECT_NEAR(init.radius[2], d0 * (1.0 + lam), 1e-15);
  const auto trace = simulate_clearance(arms, s, lam, d0);
  ASSERT_TRUE(trace.completed);
  const auto& st1 = trace.states[1];
  EXPECT_NEAR(st1.radius[0], (s - 1.0) / 2.0 * d0, 1e-15);
  EXPECT_NEAR(st1.radius[1], 0.0, 1e-15);
  EXPECT_NEAR(st1.radius[2], d0 * lam, 1e-15);
  EXPECT_EQ(trace.final_state().uncleared(), 1u);
}

TEST(Cascade, DetectsViolation) {
  std::vector<CascadeArm> arms{{0, 1.0, true}, {1, 1.0, true}, {2, 1.0, true}};
  // Ratio too large for the radii available.
  EXPECT_THROW(simulate_clearance(arms, 6.0, 3.0, 1e-3), StrategyError);
}

TEST(Star, BuildsAndEndsAtLeaf) {
  for (int k : {3, 4, 5}) {
    const auto g = share(star_graph(static_cast<std::size_t>(k)));
    const double s = 2.0 * k - 3.0 + 0.5;
    const auto st = star_strategy(g, s, 1e-3);
    EXPECT_TRUE(check_lipschitz(st.path, s));
    EXPECT_TRUE(g->is_leaf(*g->vertex_at(st.path.breakpoints().back().p)));
    EXPECT_EQ(st.schedule.trace.final_state().uncleared(), 1u);
    EXPECT_THROW(star_strategy(g, 2.0 * k - 3.0 - 0.5, 1e-3), StrategyError);
  }
  EXPECT_THROW(star_strategy(share(path_graph(2)), 9.0, 1e-3), StrategyError);
}

TEST(Comb, LayoutAndPath) {
  const auto g = share(comb_graph(4));
  const auto layout = comb_layout(*g);
  ASSERT_TRUE(layout.has_value());
  EXPECT_EQ(layout->backbone.size(), 4u);
  const auto c = comb_strategy(g, 3.5, 1e-3);
  EXPECT_TRUE(check_lipschitz(c.path, 3.5));
  EXPECT_EQ(c.cascades.size(), 2u);
  EXPECT_THROW(comb_strategy(g, 3.0, 1e-3), StrategyError);
  EXPECT_FALSE(comb_layout(star_graph(4)).has_value());
}

TEST(SecureVertex, RadiusPositive) {
  const auto g = share(star_graph(3));
  const auto frag = secure_vertex(g, 0, 8.0, 1e-3);
  EXPECT_GT(frag.plan.radius, 0.0);
  EXPECT_TRUE(same_point(*g, frag.path.breakpoints().back().p, g->vertex_point(0)));
  const auto leaf = secure_vertex(g, 1, 4.0, 1e-3);
  EXPECT_NEAR(leaf.plan.radius, 0.5 * (1.0 - 1.0 / 4.0), 1e-12);
  EXPECT_THROW(secure_vertex(g, 0, 7.0, 1e-3), StrategyError);
}

TEST(Finiteness, CertifiesAtSufficientSpeed) {
  std::mt19937_64 rng(2);
  const auto g = share(random_connected_graph(rng, 5, 1, 0.5, 1.0));
  const double s = sufficient_speed(g, 1e-3);
  const auto p = finiteness_strategy(g, s, 1e-3);
  EXPECT_TRUE(check_lipschitz(p, s));
  EXPECT_THROW(finiteness_strategy(g, 1.5, 1e-3), StrategyError);
}

TEST(Cycle, LoopDuration) {
  const auto g = share(cycle_graph(3));
  const auto p = cycle_strategy(g, 2.0);
  EXPECT_NEAR(p.duration(), 1.0, 1e-12);
  EXPECT_NEAR(total_variation(p), 2.0, 1e-9);
  EXPECT_THROW(cycle_strategy(g, 1.0), StrategyError);
}
