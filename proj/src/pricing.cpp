#include "evcharge/pricing.hpp"

namespace evcharge {

Profile total_load(std::span<const double> base, const Stacked& profiles) {
  Profile total(base.begin(), base.end());
  for (const auto& x : profiles) {
    require_length(x, base.size(), "total_load");
    for (std::size_t t = 0; t < total.size(); ++t) total[t] += x[t];
  }
  return total;
}

double company_cost(std::span<const double> base, const Stacked& profiles) {
  return squared_norm(total_load(base, profiles));
}

Stacked company_cost_gradient(std::span<const double> base,
                              const Stacked& profiles) {
  Profile block = total_load(base, profiles);
  for (double& v : block) v *= 2.0;
  return repeat_block(block, profiles.size());
}

double customer_cost(const PricingPolicy& policy, std::span<const double> own,
                     std::span<const double> others_sum,
                     std::span<const double> base) {
  require_length(others_sum, own.size(), "customer_cost others_sum");
  require_length(base, own.size(), "customer_cost base");
  const double own_weight = policy.kind == PricingKind::Aligned ? 0.5 : 1.0;
  switch (policy.kind) {
    case PricingKind::InelasticConstant:
      return policy.r;
    case PricingKind::Natural:
    case PricingKind::Aligned: {
      double c = 0.0;
      for (std::size_t t = 0; t < own.size(); ++t) {
        c += (own_weight * own[t] + others_sum[t] + base[t]) * own[t];
      }
      return c;
    }
  }
  return 0.0;
}

Profile customer_gradient(const PricingPolicy& policy,
                          std::span<const double> own,
                          std::span<const double> others_sum,
                          std::span<const double> base) {
  require_length(others_sum, own.size(), "customer_gradient others_sum");
  require_length(base, own.size(), "customer_gradient base");
  Profile g(own.size(), 0.0);
  if (policy.kind == PricingKind::InelasticConstant) return g;
  const double own_weight = policy.kind == PricingKind::Natural ? 2.0 : 1.0;
  for (std::size_t t = 0; t < own.size(); ++t) {
    g[t] = own_weight * own[t] + others_sum[t] + base[t];
  }
  return g;
}

Profile gradient_from_price(const PricingPolicy& policy,
                            std::span<const double> price,
                            std::span<const double> own) {
  require_length(own, price.size(), "gradient_from_price");
  switch (policy.kind) {
    case PricingKind::Aligned:
      return Profile(price.begin(), price.end());
    case PricingKind::Natural: {
      Profile g(price.begin(), price.end());
      for (std::size_t t = 0; t < g.size(); ++t) g[t] += own[t];
      return g;
    }
    case PricingKind::InelasticConstant:
      break;
  }
  return Profile(price.size(), 0.0);
}

PriceSignal price_signal(int day, std::span<const double> base,
                         const Stacked& profiles) {
  return PriceSignal{day, total_load(base, profiles)};
}

}  // namespace evcharge
