#include <gtest/gtest.h>

#include "copsrobber/critical_speed.hpp"
#include "copsrobber/generators.hpp"
#include "test_support.hpp"

using namespace copsrobber;
using testing_support::share;

namespace {

ProbeOptions fine_options() {
  ProbeOptions opt;
  opt.params = {2e-4, 0.02, VerifierParams::eps_floor(2e-4, 0.02)};
  return opt;
}

}  // namespace

TEST(Family, ParseRoundTrip) {
  for (auto f : {StrategyFamily::kStar, StrategyFamily::kComb, StrategyFamily::kCycle,
                 StrategyFamily::kFiniteness, StrategyFamily::kSweep}) {
    EXPECT_EQ(parse_family(to_string(f)), f);
  }
  EXPECT_FALSE(parse_family("spiral").has_value());
}

TEST(Frontier, CycleThreshold) {
  const auto t = frontier_table(share(cycle_graph(3)), StrategyFamily::kCycle,
                                {0.5, 1.0, 1.5, 2.0}, fine_options());
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0].verdict, Verdict::kSurvival);
  EXPECT_EQ(t.rows[1].verdict, Verdict::kSurvival);
  EXPECT_EQ(t.rows[2].verdict, Verdict::kCapture);
  EXPECT_EQ(t.rows[3].verdict, Verdict::kCapture);
  EXPECT_LE(*t.rows[3].time_bound, 1.0);
  EXPECT_TRUE(t.capture_times_monotone());
}

TEST(Frontier, PathAlwaysCaptures) {
  const auto t = frontier_table(share(path_graph(1)), StrategyFamily::kSweep, {0.1, 1.0, 10.0},
                                fine_options());
  for (const auto& r : t.rows) EXPECT_EQ(r.verdict, Verdict::kCapture);
  EXPECT_TRUE(t.capture_times_monotone());
}

TEST(Frontier, StarStraddlesThree) {
  const auto t = frontier_table(share(star_graph(3)), StrategyFamily::kStar,
                                {2.5, 2.9, 3.1, 3.5, 4.0}, fine_options());
  EXPECT_EQ(t.rows[0].verdict, Verdict::kSurvival);
  EXPECT_EQ(t.rows[1].verdict, Verdict::kSurvival);
  EXPECT_EQ(t.rows[1].strategy, "sweep");
  for (std::size_t i = 2; i < 5; ++i) EXPECT_EQ(t.rows[i].verdict, Verdict::kCapture);
  EXPECT_TRUE(t.capture_times_monotone());
}

TEST(Bisect, CycleNearOne) {
  const auto br =
      upper_bound_bisect(share(cycle_graph(3)), StrategyFamily::kCycle, 1.0, 3.0, 0.02,
                         fine_options());
  EXPECT_LE(br.upper - br.lower, 0.02);
  EXPECT_TRUE(br.upper_evidence.captures());
  EXPECT_FALSE(br.lower_evidence.captures());
  // Upper-bound evidence only; the slack comes from the sampled robber.
  EXPECT_GT(br.upper, 1.0);
  EXPECT_LT(br.upper, 1.3);
}

TEST(Bisect, StarAndCombNearThree) {
  const auto star = upper_bound_bisect(share(star_graph(3)), StrategyFamily::kStar, 2.5, 4.0,
                                       0.05, fine_options());
  EXPECT_LE(star.upper, 3.0 + 0.05 + 0.05);
  EXPECT_GT(star.upper, 3.0);
  const auto comb = upper_bound_bisect(share(comb_graph(3)), StrategyFamily::kComb, 2.5, 4.0,
                                       0.05, fine_options());
  EXPECT_LE(comb.upper, 3.0 + 0.05 + 0.05);
}

TEST(Bisect, EvidenceErrors) {
  const auto g = share(cycle_graph(3));
  EXPECT_THROW(upper_bound_bisect(g, StrategyFamily::kCycle, 0.5, 1.01, 0.01, fine_options()),
               EvidenceError);
  EXPECT_THROW(upper_bound_bisect(g, StrategyFamily::kCycle, 2.0, 3.0, 0.01, fine_options()),
               EvidenceError);
}
