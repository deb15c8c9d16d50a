#include <gtest/gtest.h>

#include "evcharge/pricing.hpp"
#include "support.hpp"

using namespace evcharge;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(CompanyCost, Examples) {
  EXPECT_EQ(company_cost(Profile{0, 0}, {Profile{0, 0}}), 0.0);
  EXPECT_EQ(company_cost(Profile{1, 1}, {Profile{1, 0}}), 5.0);
}

TEST(CompanyCost, HeadlineDayOneMatchesSummationOracle) {
  const auto& ref = fx::oracle_values()["headline_day1"];
  const Profile base = fx::to_profile(ref["base"]);
  const FeasibleSet s = FeasibleSet::window(24, 9, 16, 2.0, 10.0);
  const Stacked x(20, uniform_feasible(s));
  EXPECT_NEAR(company_cost(base, x), ref["company_cost"].get<double>(), 1e-9);
  const PriceSignal p = price_signal(1, base, x);
  const Profile want = fx::to_profile(ref["price"]);
  for (std::size_t t = 0; t < 24; ++t) EXPECT_NEAR(p.values[t], want[t], 1e-12);
}

TEST(CompanyCostGradient, Examples) {
  EXPECT_EQ(company_cost_gradient(Profile{0, 0}, {Profile{0, 0}, Profile{0, 0}}),
            (Stacked{{0, 0}, {0, 0}}));
  EXPECT_EQ(company_cost_gradient(Profile{1, 1}, {Profile{1, 0}}), (Stacked{{4, 2}}));
}

TEST(CustomerCost, Examples) {
  const Profile own{2, 0}, zero{0, 0};
  EXPECT_EQ(customer_cost({PricingKind::Aligned}, own, zero, zero), 2.0);
  EXPECT_EQ(customer_cost({PricingKind::Natural}, own, zero, zero), 4.0);
  EXPECT_EQ(customer_cost({PricingKind::InelasticConstant, 7.0}, own, zero, zero), 7.0);
}

TEST(CustomerGradient, Examples) {
  EXPECT_EQ(customer_gradient({PricingKind::Aligned}, Profile{1, 0}, Profile{1, 1}, Profile{1, 1}),
            (Profile{3, 2}));
  EXPECT_EQ(customer_gradient({PricingKind::InelasticConstant, 3.0}, Profile{1, 0},
                              Profile{1, 1}, Profile{1, 1}),
            (Profile{0, 0}));
}

TEST(CustomerGradient, RecoveredFromPrice) {
  std::mt19937_64 rng(3);
  for (auto kind : {PricingKind::Aligned, PricingKind::Natural}) {
    const Profile own = fx::random_profile(rng, 5, 2.0);
    const Profile others = fx::random_profile(rng, 5, 2.0);
    const Profile base = fx::random_profile(rng, 5, 2.0);
    Profile price(5);
    for (int t = 0; t < 5; ++t) price[t] = base[t] + others[t] + own[t];
    const Profile g = customer_gradient({kind}, own, others, base);
    const Profile h = gradient_from_price({kind}, price, own);
    for (int t = 0; t < 5; ++t) EXPECT_NEAR(g[t], h[t], 1e-12);
  }
}

TEST(Gradients, CentralFiniteDifferences) {
  std::mt19937_64 rng(17);
  const double step = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t slots = 2 + trial % 5;
    const Profile base = fx::random_profile(rng, slots, 3.0);
    const Profile others = fx::random_profile(rng, slots, 3.0);
    const Profile own = fx::random_profile(rng, slots, 3.0);
    for (auto kind : {PricingKind::Aligned, PricingKind::Natural, PricingKind::InelasticConstant}) {
      const PricingPolicy pol{kind, 1.5};
      const Profile g = customer_gradient(pol, own, others, base);
      for (std::size_t t = 0; t < slots; ++t) {
        Profile a = own, b = own;
        a[t] += step;
        b[t] -= step;
        const double fd = (customer_cost(pol, a, others, base) -
                           customer_cost(pol, b, others, base)) / (2 * step);
        EXPECT_LE(rel_err(g[t], fd), 1e-6);
      }
    }
    Stacked x{own, others, fx::random_profile(rng, slots, 3.0)};
    const Stacked g = company_cost_gradient(base, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t t = 0; t < slots; ++t) {
        Stacked a = x, b = x;
        a[i][t] += step;
        b[i][t] -= step;
        const double fd = (company_cost(base, a) - company_cost(base, b)) / (2 * step);
        EXPECT_LE(rel_err(g[i][t], fd), 1e-6);
      }
    }
  }
}

TEST(PriceSignal, Examples) {
  EXPECT_EQ(price_signal(1, Profile{0, 0}, {Profile{0, 0}}).values, (Profile{0, 0}));
  EXPECT_EQ(price_signal(1, Profile{1, 1}, {Profile{1, 0}}).values, (Profile{2, 1}));
}

TEST(Pricing, LengthMismatchThrows) {
  EXPECT_THROW(company_cost(Profile{1, 1}, {Profile{1}}), LengthMismatch);
}
