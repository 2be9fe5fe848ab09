#include <gtest/gtest.h>

#include <random>

#include "copsrobber/generators.hpp"
#include "copsrobber/strategies.hpp"
#include "copsrobber/verifier.hpp"
#include "test_support.hpp"

using namespace copsrobber;
using testing_support::share;

TEST(Params, FloorAndDefaults) {
  VerifierParams p{0.01, 0.005, 0.029};
  EXPECT_THROW(p.validate(), VerifierError);
  p.eps = 0.03;
  EXPECT_NO_THROW(p.validate());
  const auto d = VerifierParams::defaults(path_graph(1));
  EXPECT_NEAR(d.h, 1e-3, 1e-15);
  EXPECT_NEAR(d.eps, 2.0 * (d.h + d.dt), 1e-15);
  try {
    VerifierParams{0.01, 0.01, 0.0}.validate();
    FAIL();
  } catch (const VerifierError& e) {
    EXPECT_NE(std::string(e.what()).find("0.04"), std::string::npos);
  }
}

TEST(AvoidSet, InitialSet) {
  const auto g = path_graph(1);
  const auto d = discretize(g, 0.05);
  const auto a = initial_avoid_set(g, d, {0, 0.0}, 0.1);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.points[i].offset;
    EXPECT_EQ(a.test(i), x > 0.1 + 1e-12) << x;
  }
  EXPECT_TRUE(initial_avoid_set(g, d, {0, 0.0}, 2.0).empty());
}

TEST(PropagateStep, EmptyIsAbsorbing) {
  const auto g = path_graph(1);
  const auto d = discretize(g, 0.1);
  const AvoidSet empty(d.size());
  EXPECT_TRUE(propagate_step(g, d, empty, {{0, 0.0, 1.0}}, {0.2, 0.0}).empty());
}

TEST(PropagateStep, FarCopIsPureDilation) {
  const auto g = path_graph(1);
  const auto d = discretize(g, 0.1);
  AvoidSet one(d.size());
  one.set(0);
  const auto next = propagate_step(g, d, one, {{0, 1.0, 1.0}}, {0.2, 0.05});
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = g.offset_on(d.points[i], 0).value();
    EXPECT_EQ(next.test(i), x <= 0.2 + 1e-9) << x;
  }
  EXPECT_TRUE(next.subset_of(dilate(d, one, 0.2)));
}

TEST(Verify, PathSweepCaptures) {
  const auto g = share(path_graph(1));
  const auto cop = sweep_strategy(g, 0.5);
  const auto r = verify(cop, {0.02, 0.02, 0.1});
  EXPECT_EQ(r.verdict, Verdict::kCapture);
  EXPECT_LE(*r.time_bound, 2.0);
  // Robbers are eps-caught once the cop is within eps of the far end.
  const double t = min_capture_time(cop, {0.02, 0.02, 0.1});
  EXPECT_GE(t, (1.0 - 0.1) / 0.5);
  EXPECT_LE(t, 2.0);
}

TEST(Verify, SlowCycleSurvives) {
  const auto g = share(cycle_graph(3));
  const auto cop = cycle_loop(g, 1.0, 10.0);
  const auto r = verify(cop, {0.01, 0.01, 0.05});
  ASSERT_EQ(r.verdict, Verdict::kSurvival);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GT(*r.min_clearance, 0.45);
  EXPECT_NEAR(min_clearance(*r.witness, cop), *r.min_clearance, 1e-9);
  // Speed 1 up to the sampling slack.
  EXPECT_TRUE(check_lipschitz(*r.witness, 1.0 + 0.01 / 0.01 + 1e-9));
  EXPECT_THROW(min_capture_time(cop, {0.01, 0.01, 0.05}), VerifierError);
}

TEST(Verify, StationaryCopWitnessIsFarEnd) {
  const auto g = share(path_graph(1));
  PathBuilder b(g, {0, 0.0}, 1.0);
  b.wait(1.0);
  const auto r = verify(b.build(), {0.05, 0.05, 0.2});
  ASSERT_EQ(r.verdict, Verdict::kSurvival);
  EXPECT_NEAR(r.witness->evaluate(0.0).offset, 1.0, 1e-12);
  EXPECT_NEAR(*r.min_clearance, 1.0, 1e-12);
}

TEST(Verify, ZigZagOnCycleSurvives) {
  const auto g = share(cycle_graph(3));
  PathBuilder b(g, g->vertex_point(0), 1.0);
  for (int i = 0; i < 5; ++i) {
    b.go_to(g->vertex_point(1)).go_to(g->vertex_point(2)).go_to(g->vertex_point(0));
  }
  const auto r = verify(b.build(), {0.01, 0.02, 0.06});
  EXPECT_EQ(r.verdict, Verdict::kSurvival);
}

TEST(Verify, HugeEpsCapturesImmediately) {
  const auto g = share(path_graph(1));
  const auto cop = sweep_strategy(g, 1.0);
  const auto r = verify(cop, {0.1, 0.1, 3.0});
  EXPECT_EQ(r.verdict, Verdict::kCapture);
  EXPECT_EQ(*r.time_bound, 0.0);
}

TEST(Verify, MonotoneInEps) {
  const auto g = share(star_graph(3));
  const auto cop = star_strategy(g, 3.5, 1e-3).path;
  const VerifierParams base{2e-3, 0.04, 0.084};
  ASSERT_EQ(verify(cop, base).verdict, Verdict::kCapture);
  auto wider = base;
  wider.eps = 0.12;
  EXPECT_EQ(verify(cop, wider).verdict, Verdict::kCapture);
  EXPECT_LE(*verify(cop, wider).time_bound, *verify(cop, base).time_bound);
}

TEST(Oracle, HandEnumerablePath) {
  // Five samples on a path of length 4, two steps.
  const auto g = share(path_graph(1, 4.0));
  PathBuilder b(g, {0, 0.0}, 1.0);
  b.go_along(0, 2.0);
  const auto cop = b.build();
  const VerifierParams p{1.0, 1.0, 4.0};
  EXPECT_EQ(discretize(*g, 1.0).size(), 5u);
  const auto v = verify(cop, p, false);
  const auto o = brute_force_oracle(cop, p);
  EXPECT_EQ(v.verdict, o.verdict);
  EXPECT_EQ(v.time_bound, o.time_bound);
}

TEST(Oracle, RejectsLargeInstances) {
  const auto g = share(path_graph(1));
  EXPECT_THROW(brute_force_oracle(sweep_strategy(g, 1.0), {0.01, 0.01, 0.04}), VerifierError);
}

TEST(Oracle, AgreesOnRandomInstances) {
  std::mt19937_64 rng(99);
  int survivals = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto inst = testing_support::random_oracle_instance(rng);
    const auto v = verify(inst.cop, inst.params, false);
    const auto o = brute_force_oracle(inst.cop, inst.params);
    ASSERT_EQ(v.verdict, o.verdict) << "trial " << trial;
    if (v.verdict == Verdict::kCapture) {
      EXPECT_DOUBLE_EQ(*v.time_bound, *o.time_bound);
    } else {
      ++survivals;
    }
  }
  EXPECT_GT(survivals, 10);
  EXPECT_LT(survivals, 140);
}

TEST(Oracle, StepSetIsInsideDilation) {
  std::mt19937_64 rng(4);
  const auto g = share(star_graph(3));
  const auto cop = testing_support::random_cop_path(g, rng, 1.0, 3.0);
  const VerifierParams p{0.05, 0.1, 0.3};
  const auto d = discretize(*g, p.h);
  const TimeGrid grid(cop.duration(), p.dt);
  AvoidSet cur = initial_avoid_set(*g, d, cop.evaluate(0.0), initial_exclusion(d, p));
  for (std::size_t n = 1; n <= grid.steps(); ++n) {
    const auto rule = step_rule(d, p, grid.times[n] - grid.times[n - 1]);
    const auto next =
        propagate_step(*g, d, cur, cop.swept(grid.times[n - 1], grid.times[n]), rule);
    EXPECT_TRUE(next.subset_of(dilate(d, cur, rule.reach)));
    cur = next;
  }
}

TEST(Clearance, MatchesDenseSampling) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = share(random_connected_graph(rng, 5, 2));
    const auto a = testing_support::random_cop_path(g, rng, 1.0, 4.0);
    const auto b = testing_support::random_cop_path(g, rng, 2.0, 4.0);
    const double exact = min_clearance(a, b);
    double sampled = kInf;
    const double end = std::min(a.duration(), b.duration());
    for (int i = 0; i <= 20000; ++i) {
      const double t = end * i / 20000.0;
      sampled = std::min(sampled, intrinsic_distance(*g, a.evaluate(t), b.evaluate(t)));
    }
    EXPECT_LE(exact, sampled + 1e-12);
    EXPECT_GE(exact, sampled - 3.0 * end / 20000.0);
  }
}
