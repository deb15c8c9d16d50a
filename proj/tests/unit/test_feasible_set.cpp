#include <gtest/gtest.h>

#include <cmath>

#include "evcharge/feasible_set.hpp"
#include "support.hpp"

using namespace evcharge;
using evcharge::fx::box;

namespace {

SetViolation violation_of(const FeasibleSet& s) {
  try {
    validate(s);
  } catch (const InvalidSet& e) {
    return e.violation();
  }
  ADD_FAILURE() << "set was accepted";
  return SetViolation::NonFinite;
}

}  // namespace

TEST(Validate, HeadlineWindowIsFeasible) {
  EXPECT_NO_THROW(validate(box(Profile(8, 0.0), Profile(8, 2.0), 10.0)));
}

TEST(Validate, RejectsBrokenSets) {
  EXPECT_EQ(violation_of(box({0, 0}, {1, 1}, 3.0)), SetViolation::EmptySet);
  EXPECT_EQ(violation_of(box({1, 0}, {0, 1}, 1.0)), SetViolation::BoundsInverted);
  EXPECT_EQ(violation_of(box({0, 0}, {1}, 1.0)), SetViolation::LengthMismatch);
  EXPECT_EQ(violation_of(box({0, NAN}, {1, 1}, 1.0)), SetViolation::NonFinite);
  FeasibleSet s = box({0, 0}, {1, 1}, std::nullopt);
  s.budget = 1.0;
  EXPECT_EQ(violation_of(s), SetViolation::InactiveBudgetNonzero);
}

TEST(Project, FrozenCases) {
  for (const auto& c : evcharge::fx::oracle_values()["projection_cases"]) {
    const FeasibleSet s = box(fx::to_profile(c["low"]), fx::to_profile(c["up"]),
                              c["budget"].get<double>());
    const Profile x = project(fx::to_profile(c["h"]), s);
    const Profile want = fx::to_profile(c["x"]);
    ASSERT_EQ(x.size(), want.size());
    for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(x[t], want[t], 1e-9);
  }
}

TEST(Project, ShiftedPointOnSegment) {
  const FeasibleSet s = box({0, 0}, {2, 2}, 3.0);
  const Profile x = project(Profile{3, 0}, s);
  EXPECT_NEAR(x[0], 2.0, 1e-12);
  EXPECT_NEAR(x[1], 1.0, 1e-12);
  EXPECT_NEAR(budget_multiplier(Profile{3, 0}, s), -1.0, 1e-12);
}

TEST(Project, WithoutBudgetClips) {
  const FeasibleSet s = box({0, 0, 0}, {1, 1, 1}, std::nullopt);
  EXPECT_EQ(project(Profile{-2, 0.5, 4}, s), (Profile{0, 0.5, 1}));
}

TEST(Project, RandomPropertySuite) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t slots = 1 + trial % 9;
    const FeasibleSet s = fx::random_set(rng, slots, trial % 4 != 0);
    const Profile h = fx::random_profile(rng, slots, 5.0);
    const Profile g = fx::random_profile(rng, slots, 5.0);
    const Profile x = project(h, s);
    const Profile y = project(g, s);

    ASSERT_TRUE(contains(x, s, 1e-8));
    EXPECT_LE(distance(project(x, s), x), 1e-10) << "idempotence";
    EXPECT_LE(distance(x, y), distance(h, g) + 1e-10) << "nonexpansive";

    // KKT: x = clip(h - nu) with the reported multiplier.
    const double nu = budget_multiplier(h, s);
    double residual = 0.0;
    for (std::size_t t = 0; t < slots; ++t) {
      const double c = std::clamp(h[t] - nu, s.low[t], s.up[t]);
      residual = std::max(residual, std::abs(c - x[t]));
    }
    EXPECT_LE(residual, 1e-9);
  }
}

TEST(UniformFeasible, Examples) {
  EXPECT_EQ(uniform_feasible(box(Profile(8, 0), Profile(8, 2), 10.0)), Profile(8, 1.25));
  EXPECT_EQ(uniform_feasible(box({0, 0}, {2, 2}, 2.0)), (Profile{1, 1}));
  const Profile x = uniform_feasible(box({0, 0, 0}, {0.5, 2, 2}, 3.0));
  EXPECT_NEAR(x[0], 0.5, 1e-12);
  EXPECT_NEAR(x[1], 1.25, 1e-12);
  EXPECT_NEAR(x[2], 1.25, 1e-12);
}

TEST(UniformFeasible, WindowConventionKeepsZerosOutside) {
  const FeasibleSet s = FeasibleSet::window(24, 9, 16, 2.0, 10.0);
  const Profile x = uniform_feasible(s);
  for (std::size_t t = 0; t < 24; ++t) {
    EXPECT_DOUBLE_EQ(x[t], (t >= 8 && t < 16) ? 1.25 : 0.0);
  }
}

TEST(Diameter, Examples) {
  EXPECT_NEAR(diameter_bound(box(Profile(8, 0), Profile(8, 2), 10.0)), 2 * std::sqrt(8.0),
              1e-12);
  EXPECT_EQ(diameter_bound(box({1, 2}, {1, 2}, 3.0)), 0.0);
  EXPECT_NEAR(diameter_bound(box({0, 0}, {1, 2}, std::nullopt)), std::sqrt(5.0), 1e-12);
}

TEST(Relax, WidenWindows) {
  const FeasibleSet s = FeasibleSet::window(24, 9, 16, 2.0, 10.0);
  const FeasibleSet all = FeasibleSet::window(24, 1, 24, 2.0, std::nullopt);
  const FeasibleSet r1 = relax(s, RelaxationPlan::widen(all.low, all.up));
  EXPECT_EQ(r1.up, Profile(24, 2.0));
  EXPECT_TRUE(r1.budget_active);
  EXPECT_EQ(r1.budget, 10.0);

  const FeasibleSet wide = FeasibleSet::window(24, 8, 17, 2.0, std::nullopt);
  const FeasibleSet r2 = relax(s, RelaxationPlan::widen(wide.low, wide.up));
  EXPECT_EQ(r2.up[7], 2.0);
  EXPECT_EQ(r2.up[16], 2.0);
  EXPECT_EQ(r2.up[6], 0.0);
  EXPECT_TRUE(is_relaxation_of(r2, s));
  EXPECT_FALSE(is_relaxation_of(s, r2));
}

TEST(Relax, DropBudget) {
  const FeasibleSet r = relax(box({0, 0}, {2, 2}, 3.0), RelaxationPlan::drop_budget());
  EXPECT_FALSE(r.budget_active);
  EXPECT_EQ(r.budget, 0.0);
}

TEST(Relax, RejectsShrinking) {
  const FeasibleSet s = FeasibleSet::window(24, 9, 16, 2.0, 10.0);
  const FeasibleSet narrow = FeasibleSet::window(24, 10, 15, 2.0, std::nullopt);
  EXPECT_THROW(relax(s, RelaxationPlan::widen(narrow.low, narrow.up)), NotARelaxation);
  EXPECT_THROW(relax(s, RelaxationPlan::replace_with(box(Profile(24, 0), Profile(24, 2), 12.0))),
               NotARelaxation);
}

TEST(Contains, Examples) {
  const FeasibleSet s = box(Profile(8, 0), Profile(8, 2), 10.0);
  EXPECT_TRUE(contains(uniform_feasible(s), s, 1e-12));
  EXPECT_FALSE(contains(Profile(8, 3.0), s, 1e-8));
}

TEST(HalfSquareRange, MatchesVertexEnumeration) {
  // Budgeted box in 3 slots: the max of a convex function sits on a vertex
  // of the polytope; enumerate points with at most one free coordinate.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const FeasibleSet s = fx::random_set(rng, 3, true);
    double best = -1.0;
    for (int free = 0; free < 3; ++free) {
      for (int mask = 0; mask < 4; ++mask) {
        Profile x(3);
        double fixed = 0.0;
        int bit = 0;
        for (int t = 0; t < 3; ++t) {
          if (t == free) continue;
          x[t] = (mask >> bit++) & 1 ? s.up[t] : s.low[t];
          fixed += x[t];
        }
        x[free] = s.budget - fixed;
        if (x[free] < s.low[free] - 1e-12 || x[free] > s.up[free] + 1e-12) continue;
        best = std::max(best, 0.5 * squared_norm(x));
      }
    }
    const HalfSquareRange r = half_square_range(s);
    EXPECT_TRUE(r.max_exact);
    EXPECT_NEAR(r.max, best, 1e-9);
    EXPECT_NEAR(r.min, 0.5 * squared_norm(project(Profile(3, 0.0), s)), 1e-12);
  }
}

TEST(HalfSquareRange, HeadlineWindow) {
  const HalfSquareRange r = half_square_range(FeasibleSet::window(24, 9, 16, 2.0, 10.0));
  EXPECT_NEAR(r.min, 0.5 * 8 * 1.25 * 1.25, 1e-12);
  EXPECT_NEAR(r.max, 0.5 * 5 * 4.0, 1e-12);  // five slots at 2
}
