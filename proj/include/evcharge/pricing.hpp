#pragma once

#include <span>

#include "evcharge/profile.hpp"

namespace evcharge {

enum class PricingKind {
  Natural,            // (own + others + base)^T own
  Aligned,            // (own/2 + others + base)^T own
  InelasticConstant,  // constant r
};

struct PricingPolicy {
  PricingKind kind = PricingKind::Aligned;
  double r = 0.0;

  friend bool operator==(const PricingPolicy&, const PricingPolicy&) = default;
};

/// Broadcast signal of one day: base load plus total charging load.
struct PriceSignal {
  int day = 0;
  Profile values;
};

/// D + sum_i x_i.
Profile total_load(std::span<const double> base, const Stacked& profiles);

/// sum_t (D(t) + sum_i x_i(t))^2.
double company_cost(std::span<const double> base, const Stacked& profiles);

/// N identical blocks 2(D + sum_i x_i).
Stacked company_cost_gradient(std::span<const double> base,
                              const Stacked& profiles);

double customer_cost(const PricingPolicy& policy, std::span<const double> own,
                     std::span<const double> others_sum,
                     std::span<const double> base);

Profile customer_gradient(const PricingPolicy& policy,
                          std::span<const double> own,
                          std::span<const double> others_sum,
                          std::span<const double> base);

/// Gradient recovered from the public price and the customer's own profile:
/// Aligned uses the price itself, Natural adds the own profile once.
Profile gradient_from_price(const PricingPolicy& policy,
                            std::span<const double> price,
                            std::span<const double> own);

PriceSignal price_signal(int day, std::span<const double> base,
                         const Stacked& profiles);

}  // namespace evcharge
