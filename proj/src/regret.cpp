#include "evcharge/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evcharge {
namespace {

void require_horizon(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw HorizonMismatch(std::string(what) + ": need " + std::to_string(need) +
                          " entries, got " + std::to_string(have));
  }
}

PricingPolicy policy_for(const ScenarioConfig& cfg, std::size_t i) {
  if (cfg.fleet[i].cls == CustomerClass::Inelastic) {
    return {PricingKind::InelasticConstant, cfg.pricing.r};
  }
  return cfg.pricing;
}

Profile others_sum(const DayRecord& rec, std::size_t i) {
  Profile o(rec.base.size());
  for (std::size_t t = 0; t < o.size(); ++t) {
    o[t] = rec.price.values[t] - rec.base[t] - rec.profiles[i][t];
  }
  return o;
}

std::vector<double> prefix_sums(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = (s += v[k]);
  return out;
}

bool has_class(const ScenarioConfig& cfg, CustomerClass cls) {
  return std::any_of(cfg.fleet.begin(), cfg.fleet.end(),
                     [cls](const CustomerSpec& c) { return c.cls == cls; });
}

bool relaxes(const ScenarioConfig& cfg) {
  return cfg.relax_days > 0 && has_class(cfg, CustomerClass::Controllable);
}

double eta_of(const ScenarioConfig& cfg) { return cfg.eta_company; }

// ||grad c_u^k + eps^k||^2 for one day, stacked over customers.
double perturbed_gradient_sq(const DayRecord& rec) {
  double s = 0.0;
  for (std::size_t i = 0; i < rec.profiles.size(); ++i) {
    for (std::size_t t = 0; t < rec.base.size(); ++t) {
      const double v = rec.company_gradient_block[t] + rec.epsilon[i][t];
      s += v * v;
    }
  }
  return s;
}

BoundCheck check_dominance(std::string name, const std::vector<double>& regret,
                           const std::vector<double>& bound) {
  constexpr double kSlack = 1e-6;
  BoundCheck c;
  c.name = std::move(name);
  c.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < regret.size(); ++k) {
    const double margin = bound[k] - regret[k];
    if (margin < c.worst_margin) {
      c.worst_margin = margin;
      c.worst_day = static_cast<int>(k + 1);
    }
  }
  c.passed = c.worst_margin >= -kSlack;
  return c;
}

BoundCheck not_applicable(std::string name) {
  BoundCheck c;
  c.name = std::move(name);
  c.applicable = false;
  return c;
}

}  // namespace

std::vector<double> static_regret_customer(const SimulationTrace& trace,
                                           std::size_t customer,
                                           const Profile& x_star) {
  const ScenarioConfig& cfg = trace.config;
  require_length(x_star, cfg.slots, "static_regret_customer comparator");
  const PricingPolicy policy = policy_for(cfg, customer);
  std::vector<double> gap;
  gap.reserve(trace.days.size());
  for (const DayRecord& rec : trace.days) {
    const Profile o = others_sum(rec, customer);
    gap.push_back(rec.customer_costs[customer] -
                  customer_cost(policy, x_star, o, rec.base));
  }
  return prefix_sums(gap);
}

std::vector<double> static_regret_company(const SimulationTrace& trace,
                                          const Stacked& x_star) {
  if (x_star.size() != trace.customers()) {
    throw HorizonMismatch("static_regret_company: comparator block count");
  }
  std::vector<double> gap;
  gap.reserve(trace.days.size());
  for (const DayRecord& rec : trace.days) {
    gap.push_back(rec.company_cost - company_cost(rec.base, x_star));
  }
  return prefix_sums(gap);
}

std::vector<double> tracking_regret(const SimulationTrace& trace,
                                    const std::vector<Stacked>& perday) {
  require_horizon(perday.size(), trace.days.size(), "tracking_regret");
  std::vector<double> gap;
  gap.reserve(trace.days.size());
  for (std::size_t k = 0; k < trace.days.size(); ++k) {
    const DayRecord& rec = trace.days[k];
    gap.push_back(rec.company_cost - company_cost(rec.base, perday[k]));
  }
  return prefix_sums(gap);
}

SpreadTerms spread_terms(const ScenarioConfig& config) {
  SpreadTerms s;
  for (const auto& c : config.fleet) {
    const HalfSquareRange r = half_square_range(c.set);
    s.customer.push_back(r.spread());
    s.company += r.spread();
    s.exact = s.exact && r.max_exact;
    const HalfSquareRange rr =
        half_square_range(c.relaxed_set ? *c.relaxed_set : c.set);
    s.company_relaxed += rr.spread();
    s.exact = s.exact && rr.max_exact;
  }
  return s;
}

std::vector<double> static_bound_customer(const SimulationTrace& trace,
                                          std::size_t customer) {
  const CustomerSpec& spec = trace.config.fleet.at(customer);
  const double p = half_square_range(spec.set).spread();
  const double eta = spec.eta;
  std::vector<double> out;
  out.reserve(trace.days.size());
  double sum = 0.0;
  for (const DayRecord& rec : trace.days) {
    sum += std::pow(distance(rec.customer_gradients[customer],
                             rec.predictions[customer]), 2);
    out.push_back(p / eta + 0.5 * eta * sum);
  }
  return out;
}

std::vector<double> static_bound_company(const SimulationTrace& trace,
                                         bool ignore_predictions) {
  const double p = spread_terms(trace.config).company;
  const double eta = eta_of(trace.config);
  std::vector<double> out;
  out.reserve(trace.days.size());
  double sum = 0.0;
  for (const DayRecord& rec : trace.days) {
    for (std::size_t i = 0; i < rec.profiles.size(); ++i) {
      if (ignore_predictions) {
        sum += squared_norm(rec.company_gradient_block);
      } else {
        sum += std::pow(distance(rec.company_gradient_block,
                                 rec.company_predictions[i]), 2);
      }
    }
    out.push_back(p / eta + 0.5 * eta * sum);
  }
  return out;
}

std::vector<double> TrackingBoundTerms::evaluate(double eta) const {
  std::vector<double> out(endpoint.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (endpoint[k] + path[k]) / eta + 0.5 * eta * prediction[k];
  }
  return out;
}

TrackingBoundTerms tracking_bound_terms(const SimulationTrace& trace,
                                        const std::vector<Stacked>& perday) {
  const int K = trace.horizon();
  require_horizon(perday.size(), static_cast<std::size_t>(K) + 1,
                  "tracking_bound");
  const std::size_t n = trace.customers();

  auto stacked_h = [&](int k) {
    Stacked h;
    h.reserve(n);
    for (std::size_t i = 0; i < n; ++i) h.push_back(trace.h_snapshot(k, i));
    return h;
  };
  auto inner = [](const Stacked& a, const Stacked& b, const Stacked& c) {
    // a^T (b - c)
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t t = 0; t < a[i].size(); ++t) {
        s += a[i][t] * (b[i][t] - c[i][t]);
      }
    }
    return s;
  };

  const Stacked h1 = stacked_h(1);
  const double start = -0.5 * squared_norm(h1) - inner(h1, perday[0], h1);

  TrackingBoundTerms terms;
  double max_h = norm(h1);
  double path_length = 0.0;
  double pred = 0.0;
  for (int k = 1; k <= K; ++k) {
    const Stacked hk = stacked_h(k);
    max_h = std::max(max_h, norm(hk));
    path_length += distance(perday[static_cast<std::size_t>(k - 1)],
                            perday[static_cast<std::size_t>(k)]);
    const DayRecord& rec = trace.day(k);
    for (std::size_t i = 0; i < n; ++i) {
      pred += std::pow(distance(rec.company_gradient_block,
                                rec.company_predictions[i]), 2);
    }
    const Stacked hn = stacked_h(k + 1);
    const double end = 0.5 * squared_norm(hn) +
                       inner(hn, perday[static_cast<std::size_t>(k)], hn);
    terms.endpoint.push_back(end + start);
    terms.path.push_back(max_h * path_length);
    terms.prediction.push_back(pred);
  }
  return terms;
}

std::vector<double> tracking_bound(const SimulationTrace& trace,
                                   const std::vector<Stacked>& perday) {
  return tracking_bound_terms(trace, perday).evaluate(eta_of(trace.config));
}

Stacked epsilon_terms(const DayRecord& record,
                      const std::vector<bool>& inelastic) {
  if (inelastic.size() != record.profiles.size()) {
    throw LengthMismatch("epsilon_terms: mask size");
  }
  Stacked eps;
  eps.reserve(inelastic.size());
  for (bool lazy : inelastic) {
    Profile e(record.price.values.size(), 0.0);
    if (lazy) {
      for (std::size_t t = 0; t < e.size(); ++t) e[t] = -record.price.values[t];
    }
    eps.push_back(std::move(e));
  }
  return eps;
}

std::vector<double> inelastic_bound(const SimulationTrace& trace) {
  const ScenarioConfig& cfg = trace.config;
  const double p = spread_terms(cfg).company;
  const double eta = eta_of(cfg);
  const auto mask = inelastic_mask(cfg);
  std::vector<double> diam(cfg.fleet.size(), 0.0);
  for (std::size_t i = 0; i < cfg.fleet.size(); ++i) {
    if (mask[i]) diam[i] = diameter_bound(cfg.fleet[i].set);
  }
  std::vector<double> eps_max(cfg.fleet.size(), 0.0);
  std::vector<double> out;
  double sum = 0.0;
  for (const DayRecord& rec : trace.days) {
    sum += perturbed_gradient_sq(rec);
    double coupling = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      eps_max[i] = std::max(eps_max[i], norm(rec.epsilon[i]));
      coupling += diam[i] * eps_max[i];
    }
    out.push_back(p / eta + 0.5 * eta * sum + rec.day * coupling);
  }
  return out;
}

double inelastic_plateau(const SimulationTrace& trace) {
  const auto mask = inelastic_mask(trace.config);
  double total = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    double eps = 0.0;
    for (const DayRecord& rec : trace.days) {
      eps = std::max(eps, norm(rec.epsilon[i]));
    }
    total += diameter_bound(trace.config.fleet[i].set) * eps;
  }
  return total;
}

RelaxationCheck relaxation_condition(const SimulationTrace& trace,
                                     const Stacked& x_star,
                                     const Stacked& x_tilde_star) {
  const ScenarioConfig& cfg = trace.config;
  const int K = trace.horizon();
  const int split = K - cfg.relax_days;
  const auto mask = inelastic_mask(cfg);

  // Norm bounds used by the surrogate.
  double eps_bound = 0.0;
  for (const auto& c : cfg.fleet) eps_bound += norm(c.set.up);
  double max_base = 0.0;
  for (const DayRecord& rec : trace.days) {
    max_base = std::max(max_base, norm(rec.base));
  }
  eps_bound += max_base;

  RelaxationCheck out;
  for (const DayRecord& rec : trace.days) {
    double coupling = 0.0;
    double bound_coupling = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      for (std::size_t t = 0; t < cfg.slots; ++t) {
        coupling += (rec.profiles[i][t] - x_star[i][t]) * rec.epsilon[i][t];
      }
      const double xb = max_norm(cfg.fleet[i].set);
      bound_coupling += 2.0 * xb * eps_bound;
    }
    out.lhs -= coupling;
    out.norm_cost += bound_coupling;
    if (rec.day > split) {
      const double delta = company_cost(rec.base, x_tilde_star) -
                           company_cost(rec.base, x_star);
      out.lhs += delta;
      out.relaxation_gain -= delta;
    }
  }
  out.holds = out.lhs <= 0.0;
  out.surrogate_holds = out.relaxation_gain >= out.norm_cost;
  return out;
}

std::vector<double> relaxation_bound(const SimulationTrace& trace) {
  const ScenarioConfig& cfg = trace.config;
  const SpreadTerms spread = spread_terms(cfg);
  const double eta = eta_of(cfg);
  const int split = trace.horizon() - cfg.relax_days;
  std::vector<double> out;
  double before = 0.0;
  double after = 0.0;
  for (const DayRecord& rec : trace.days) {
    if (rec.day <= split) {
      before += perturbed_gradient_sq(rec);
    } else {
      after += perturbed_gradient_sq(rec);
    }
    double v = spread.company / eta + 0.5 * eta * before;
    if (rec.day > split) v += spread.company_relaxed / eta + 0.5 * eta * after;
    out.push_back(v);
  }
  return out;
}

Comparators compute_comparators(const SimulationTrace& trace,
                                const SolveOptions& options) {
  Comparators c;
  c.x_star = company_static_optimum(trace, options);
  for (std::size_t i = 0; i < trace.customers(); ++i) {
    c.x_customer_star.push_back(customer_static_optimum(trace, i, options));
  }
  c.perday = perday_optima(trace, options);
  if (has_class(trace.config, CustomerClass::Controllable)) {
    c.x_tilde_star = relaxed_static_optimum(trace, options);
  }
  return c;
}

bool RegretReport::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) {
    return !c.applicable || c.passed;
  });
}

const std::vector<double>& RegretReport::applicable_company_bound() const {
  if (!relaxation_bound.empty()) return relaxation_bound;
  if (!inelastic_bound.empty()) return inelastic_bound;
  return company_bound;
}

RegretReport build_report(const SimulationTrace& trace,
                          const Comparators& comparators) {
  const ScenarioConfig& cfg = trace.config;
  const std::size_t n = trace.customers();
  RegretReport r;
  r.horizon = trace.horizon();
  r.spread = spread_terms(cfg);

  for (std::size_t i = 0; i < n; ++i) {
    r.customer_regret.push_back(
        static_regret_customer(trace, i, comparators.x_customer_star[i]));
    r.customer_bound.push_back(static_bound_customer(trace, i));
  }
  r.company_regret = static_regret_company(trace, comparators.x_star);
  r.tracking = tracking_regret(trace, comparators.perday);
  r.company_bound = static_bound_company(trace);
  r.company_bound_no_prediction = static_bound_company(trace, true);
  r.tracking_bound = tracking_bound(trace, comparators.perday);

  const bool lazy = has_class(cfg, CustomerClass::Inelastic);
  if (lazy) r.inelastic_bound = inelastic_bound(trace);
  if (relaxes(cfg)) {
    r.relaxation_bound = relaxation_bound(trace);
    r.relaxation =
        relaxation_condition(trace, comparators.x_star, comparators.x_tilde_star);
  }

  for (int k = 1; k <= r.horizon; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    r.company_average.push_back(r.company_regret[idx] / k);
    r.tracking_average.push_back(r.tracking[idx] / k);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += r.customer_regret[i][idx] / k;
    r.mean_customer_average.push_back(mean / static_cast<double>(n));
  }

  // Customer bounds hold for every customer whose iterates stay in F_i.
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = "customer " + std::to_string(i) + " static";
    if (cfg.fleet[i].cls == CustomerClass::Controllable && relaxes(cfg)) {
      r.checks.push_back(not_applicable(name));
    } else {
      r.checks.push_back(
          check_dominance(name, r.customer_regret[i], r.customer_bound[i]));
    }
  }
  const bool aligned = cfg.pricing.kind == PricingKind::Aligned && cfg.coupled_steps;
  if (!aligned) {
    r.checks.push_back(not_applicable("company static"));
  } else if (relaxes(cfg)) {
    BoundCheck c = check_dominance("company relaxation", r.company_regret,
                                   r.relaxation_bound);
    c.applicable = r.relaxation.holds;
    r.checks.push_back(c);
  } else if (lazy) {
    r.checks.push_back(check_dominance("company inelastic", r.company_regret,
                                       r.inelastic_bound));
  } else {
    r.checks.push_back(
        check_dominance("company static", r.company_regret, r.company_bound));
  }
  if (aligned && !lazy && !relaxes(cfg)) {
    r.checks.push_back(
        check_dominance("company tracking", r.tracking, r.tracking_bound));
  } else {
    r.checks.push_back(not_applicable("company tracking"));
  }
  return r;
}

}  // namespace evcharge
