#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "evcharge/regret.hpp"
#include "support.hpp"

using namespace evcharge;

namespace {

// Overwrites every prediction with the realized gradient.
SimulationTrace with_perfect_predictions(SimulationTrace tr) {
  for (auto& rec : tr.days) {
    rec.predictions = rec.customer_gradients;
    for (auto& m : rec.company_predictions) m = rec.company_gradient_block;
  }
  return tr;
}

}  // namespace

TEST(StaticRegret, ZeroWhenPlayingTheComparator) {
  const SimulationTrace tr = run_scenario(fx::small_config(2, 10, PredictorKind::Zero));
  // Comparing against the realized profile of a day-invariant run where the
  // profile never moves (all inelastic) gives zero regret.
  ScenarioConfig cfg = fx::small_config(2, 10, PredictorKind::Zero);
  for (auto& c : cfg.fleet) c.cls = CustomerClass::Inelastic;
  const SimulationTrace frozen = run_scenario(cfg);
  const Stacked x = frozen.day(1).profiles;
  for (double r : static_regret_company(frozen, x)) EXPECT_EQ(r, 0.0);
  for (double r : static_regret_customer(frozen, 0, x[0])) EXPECT_EQ(r, 0.0);
  std::vector<Stacked> perday(11, x);
  for (double r : tracking_regret(frozen, perday)) EXPECT_EQ(r, 0.0);
  EXPECT_GT(tr.horizon(), 0);
}

TEST(StaticRegret, NonnegativeAtHorizon) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig1_static")));
  const Comparators c = compute_comparators(tr);
  EXPECT_GE(static_regret_company(tr, c.x_star).back(), -1e-6);
  for (std::size_t i = 0; i < tr.customers(); ++i) {
    EXPECT_GE(static_regret_customer(tr, i, c.x_customer_star[i]).back(), -1e-6);
  }
}

TEST(StaticRegret, HeadlineCustomerAverageDecays) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig1_static")));
  const Profile x = customer_static_optimum(tr, 0);
  const auto r = static_regret_customer(tr, 0, x);
  EXPECT_LT(r[199] / 200.0, 0.1 * r[9] / 10.0);
}

TEST(StaticBound, PerfectPredictionLeavesSpreadTerm) {
  const SimulationTrace tr = with_perfect_predictions(
      run_scenario(fx::small_config(2, 20, PredictorKind::Zero)));
  const double p = half_square_range(tr.config.fleet[0].set).spread();
  for (double b : static_bound_customer(tr, 0)) EXPECT_DOUBLE_EQ(b, p / tr.config.fleet[0].eta);
  const double pu = spread_terms(tr.config).company;
  for (double b : static_bound_company(tr)) EXPECT_DOUBLE_EQ(b, pu / tr.config.eta_company);
}

TEST(StaticBound, ZeroGradientsLeaveSpreadTerm) {
  SimulationTrace tr = run_scenario(fx::small_config(2, 10, PredictorKind::Zero));
  for (auto& rec : tr.days) {
    for (auto& g : rec.customer_gradients) std::fill(g.begin(), g.end(), 0.0);
    for (auto& m : rec.predictions) std::fill(m.begin(), m.end(), 0.0);
    std::fill(rec.company_gradient_block.begin(), rec.company_gradient_block.end(), 0.0);
    for (auto& m : rec.company_predictions) std::fill(m.begin(), m.end(), 0.0);
  }
  const double p = half_square_range(tr.config.fleet[1].set).spread();
  for (double b : static_bound_customer(tr, 1)) EXPECT_DOUBLE_EQ(b, p / tr.config.fleet[1].eta);
  const double pu = spread_terms(tr.config).company;
  for (double b : static_bound_company(tr)) EXPECT_DOUBLE_EQ(b, pu / tr.config.eta_company);
}

TEST(StaticBound, SquareRootShape) {
  // With eta = c / sqrt(K) tuned to each horizon, the final bound grows like
  // sqrt(K): quadrupling the horizon at most doubles it (plus slack).
  auto final_bound = [](int days) {
    ScenarioConfig cfg = load_config(fx::preset("fig1_static"));
    cfg.days = days;
    for (auto& c : cfg.fleet) c.eta = 0.05 / std::sqrt(static_cast<double>(days));
    cfg.eta_company = cfg.fleet.front().eta / 2;
    return static_bound_company(run_scenario(cfg)).back();
  };
  for (int k : {50, 60, 80}) EXPECT_LE(final_bound(4 * k) / final_bound(k), 2.2) << k;
}

TEST(TrackingRegret, DayInvariantEqualsStatic) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig1_static")));
  const Comparators c = compute_comparators(tr);
  const auto s = static_regret_company(tr, c.x_star);
  const auto t = tracking_regret(tr, c.perday);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(s[k], t[k], 1e-6);
  const TrackingBoundTerms terms = tracking_bound_terms(tr, c.perday);
  for (double p : terms.path) EXPECT_NEAR(p, 0.0, 1e-6);
}

TEST(TrackingRegret, SwitchingDominatesStatic) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig3_switching")));
  const Comparators c = compute_comparators(tr);
  const auto s = static_regret_company(tr, c.x_star);
  const auto t = tracking_regret(tr, c.perday);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_GE(t[k], s[k] - 1e-6);
}

TEST(TrackingBound, PerfectPredictionLimit) {
  const SimulationTrace tr = with_perfect_predictions(
      run_scenario(load_config(fx::preset("fig3_switching"))));
  const auto perday = perday_optima(tr);
  const TrackingBoundTerms terms = tracking_bound_terms(tr, perday);
  for (double p : terms.prediction) EXPECT_EQ(p, 0.0);
  // bound - (endpoint + path) / eta vanishes for every eta.
  for (double eta : {1.0, 1e3, 1e6}) {
    const auto b = terms.evaluate(eta);
    for (std::size_t k = 0; k < b.size(); ++k) {
      EXPECT_NEAR(b[k] - (terms.endpoint[k] + terms.path[k]) / eta, 0.0, 1e-9);
    }
  }
}

TEST(TrackingBound, SwitchingGrowsLinearly) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig3_switching")));
  const auto b = tracking_bound(tr, perday_optima(tr));
  const double early = (b[99] - b[49]) / 50.0;
  const double late = (b[199] - b[149]) / 50.0;
  EXPECT_GT(early, 0.0);
  EXPECT_GT(late, early);  // max ||h|| grows too, so the slope is not below linear
}

TEST(Epsilon, Examples) {
  DayRecord rec;
  rec.price.values = {2, 1};
  rec.profiles = {{0, 0}, {1, 0}};
  EXPECT_EQ(epsilon_terms(rec, {false, false}), (Stacked{{0, 0}, {0, 0}}));
  EXPECT_EQ(epsilon_terms(rec, {true, false}), (Stacked{{-2, -1}, {0, 0}}));
}

TEST(Epsilon, NormChainBound) {
  for (const char* name : {"fig6_inelastic_5", "fig6_inelastic_15", "fig7_relaxation_1"}) {
    const SimulationTrace tr = run_scenario(load_config(fx::preset(name)));
    double bound = 0.0;
    for (const auto& c : tr.config.fleet) bound += norm(c.set.up);
    double max_base = 0.0;
    for (const auto& rec : tr.days) max_base = std::max(max_base, norm(rec.base));
    bound += max_base;
    for (const auto& rec : tr.days) {
      for (const auto& e : rec.epsilon) EXPECT_LE(norm(e), bound + 1e-9);
    }
  }
}

TEST(InelasticBound, ReducesWithoutInelasticCustomers) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig1_static")));
  const auto a = inelastic_bound(tr);
  const auto b = static_bound_company(tr, true);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-9 * b[k]);
}

TEST(InelasticBound, ApproachesPlateau) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig6_inelastic_5")));
  const auto b = inelastic_bound(tr);
  const double plateau = inelastic_plateau(tr);
  EXPECT_GT(plateau, 0.0);
  auto excess = [&](int k) { return b[k - 1] / k - plateau; };
  // P/(eta K) + (eta/2K) sum ||.||^2 with eta = c/sqrt(K_total) fixed: the
  // excess falls like 1/K plus a constant; check it is decreasing.
  for (int k = 20; k < 200; k += 20) EXPECT_LT(excess(k + 20), excess(k));
}

TEST(InelasticBound, DominatesRegretOnSweepMember) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig6_inelastic_5")));
  const Comparators c = compute_comparators(tr);
  const auto r = static_regret_company(tr, c.x_star);
  const auto b = inelastic_bound(tr);
  EXPECT_LE(r.back() / 200.0, b.back() / 200.0);
}

TEST(RelaxationCondition, EmptySums) {
  const SimulationTrace tr = run_scenario(fx::small_config(2, 10, PredictorKind::Zero));
  const Stacked x = company_static_optimum(tr);
  const RelaxationCheck r = relaxation_condition(tr, x, x);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(RelaxationCondition, NullRelaxationReducesToCoupling) {
  ScenarioConfig cfg = fx::small_config(4, 20, PredictorKind::Zero);
  cfg.fleet[0].cls = CustomerClass::Inelastic;
  cfg.fleet[1].cls = CustomerClass::Controllable;
  cfg.fleet[1].relaxed_set = cfg.fleet[1].set;
  cfg.relax_days = 5;
  const SimulationTrace tr = run_scenario(cfg);
  const Stacked x = company_static_optimum(tr);
  const RelaxationCheck r = relaxation_condition(tr, x, x);
  double coupling = 0.0;
  for (const auto& rec : tr.days) {
    for (std::size_t t = 0; t < 4; ++t) {
      coupling += (rec.profiles[0][t] - x[0][t]) * rec.epsilon[0][t];
    }
  }
  EXPECT_NEAR(r.lhs, -coupling, 1e-9 * std::max(1.0, std::abs(coupling)));
  EXPECT_EQ(r.relaxation_gain, 0.0);
}

TEST(Report, ChecksOnHeadlineRun) {
  const SimulationTrace tr = run_scenario(load_config(fx::preset("fig3_switching")));
  const RegretReport r = build_report(tr, compute_comparators(tr));
  EXPECT_EQ(r.horizon, 200);
  EXPECT_TRUE(r.all_checks_passed());
  EXPECT_EQ(r.checks.size(), 22u);  // 20 customers, company static, tracking
}
