#include "evcharge/simulation.hpp"

#include <cmath>
#include <string>

namespace evcharge {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_draw(std::uint64_t seed, int day) {
  const std::uint64_t bits =
      splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(day));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

void check_profile(const Profile& p, std::size_t slots,
                   const std::string& field) {
  if (p.size() != slots) {
    throw ValidationError(field, "expected " + std::to_string(slots) +
                                     " values, got " +
                                     std::to_string(p.size()));
  }
  for (double v : p) {
    if (!std::isfinite(v)) throw ValidationError(field, "non-finite value");
  }
}

}  // namespace

const char* to_string(CustomerClass c) {
  switch (c) {
    case CustomerClass::PriceSensitive:
      return "price_sensitive";
    case CustomerClass::Inelastic:
      return "inelastic";
    case CustomerClass::Controllable:
      return "controllable";
  }
  return "unknown";
}

void validate(const ScenarioConfig& config) {
  if (config.slots == 0) throw ValidationError("T", "must be positive");
  if (config.days < 1) throw ValidationError("K", "must be at least 1");
  if (config.relax_days < 0 || config.relax_days > config.days) {
    throw ValidationError("J", "must lie in [0, K]");
  }
  if (config.fleet.empty()) throw ValidationError("fleet", "no customers");
  if (config.pricing.kind == PricingKind::InelasticConstant) {
    throw ValidationError("pricing", "must be natural or aligned");
  }
  if (!std::isfinite(config.pricing.r)) {
    throw ValidationError("inelastic_r", "must be finite");
  }
  if (!(config.eta_company > 0.0)) {
    throw ValidationError("eta_company", "must be positive");
  }
  for (std::size_t i = 0; i < config.fleet.size(); ++i) {
    const CustomerSpec& c = config.fleet[i];
    const std::string field = "fleet[" + std::to_string(i) + "]";
    if (c.set.slots() != config.slots) {
      throw ValidationError(field + ".set", "length differs from T");
    }
    if (auto v = find_violation(c.set)) {
      throw ValidationError(field + ".set", to_string(*v));
    }
    if (!(c.eta > 0.0) || !std::isfinite(c.eta)) {
      throw ValidationError(field + ".eta", "must be positive");
    }
    if (c.predictor == PredictorKind::Perfect) {
      throw ValidationError(field + ".predictor",
                            "perfect prediction is test-only");
    }
    if (c.cls == CustomerClass::Controllable) {
      if (!c.relaxed_set) {
        if (config.relax_days > 0) {
          throw ValidationError(field + ".relax",
                                "controllable needs a relaxation when J > 0");
        }
      } else if (!is_relaxation_of(*c.relaxed_set, c.set) ||
                 find_violation(*c.relaxed_set)) {
        throw ValidationError(field + ".relax", "not a valid relaxation");
      }
    } else if (c.relaxed_set) {
      throw ValidationError(field + ".relax", "only controllable customers relax");
    }
    if (c.cls == CustomerClass::Inelastic &&
        c.predictor != PredictorKind::Zero) {
      throw ValidationError(field + ".predictor",
                            "inelastic customers carry no predictor");
    }
    if (config.coupled_steps &&
        std::abs(config.eta_company - 0.5 * c.eta) >
            1e-15 * std::max(1.0, c.eta)) {
      throw ValidationError("eta_company", "must equal eta_i / 2 for every customer");
    }
  }
  const BaseLoadModel& m = config.base_load;
  switch (m.kind) {
    case BaseLoadModel::Kind::Static:
      check_profile(m.a, config.slots, "base_load.a");
      break;
    case BaseLoadModel::Kind::Switching:
      check_profile(m.a, config.slots, "base_load.a");
      check_profile(m.b, config.slots, "base_load.b");
      if (!(m.p >= 0.0 && m.p <= 1.0)) {
        throw ValidationError("base_load.p", "must lie in [0, 1]");
      }
      break;
    case BaseLoadModel::Kind::Trace:
      if (m.trace.size() < static_cast<std::size_t>(config.days)) {
        throw ValidationError("base_load.trace", "shorter than K");
      }
      for (std::size_t k = 0; k < m.trace.size(); ++k) {
        check_profile(m.trace[k], config.slots,
                      "base_load.trace[" + std::to_string(k) + "]");
      }
      break;
  }
}

Profile base_load(const BaseLoadModel& model, int day, std::uint64_t seed) {
  if (day < 1) throw Error("base_load: day must be >= 1");
  switch (model.kind) {
    case BaseLoadModel::Kind::Static:
      return model.a;
    case BaseLoadModel::Kind::Switching:
      if (model.rule == BaseLoadModel::SwitchRule::Alternate) {
        return day % 2 == 1 ? model.a : model.b;
      }
      return unit_draw(seed, day) < model.p ? model.a : model.b;
    case BaseLoadModel::Kind::Trace:
      if (static_cast<std::size_t>(day) > model.trace.size()) {
        throw TraceTooShort("base_load: trace has " +
                            std::to_string(model.trace.size()) +
                            " days, day " + std::to_string(day) + " requested");
      }
      return model.trace[static_cast<std::size_t>(day - 1)];
  }
  return {};
}

FleetState initialize_fleet(const ScenarioConfig& config) {
  FleetState fleet;
  fleet.customers.reserve(config.fleet.size());
  for (const CustomerSpec& spec : config.fleet) {
    CustomerRuntime rt;
    rt.state = initial_state(spec.set, spec.eta);
    const PredictorKind kind = spec.cls == CustomerClass::PriceSensitive
                                   ? spec.predictor
                                   : PredictorKind::Zero;
    rt.predictor = Predictor(kind, config.slots);
    rt.last_prediction.assign(config.slots, 0.0);
    fleet.customers.push_back(std::move(rt));
  }
  return fleet;
}

std::pair<FleetState, DayRecord> run_day(const FleetState& fleet,
                                         const ScenarioConfig& config,
                                         int day) {
  const std::size_t n = config.fleet.size();
  const std::size_t slots = config.slots;

  DayRecord rec;
  rec.day = day;
  rec.base = base_load(config.base_load, day, config.seed);
  rec.profiles.reserve(n);
  for (const auto& c : fleet.customers) rec.profiles.push_back(c.state.x);
  rec.price = price_signal(day, rec.base, rec.profiles);
  rec.company_gradient_block = rec.price.values;
  for (double& v : rec.company_gradient_block) v *= 2.0;
  rec.company_cost = squared_norm(rec.price.values);

  PricingPolicy inelastic_policy{PricingKind::InelasticConstant,
                                 config.pricing.r};
  FleetState next = fleet;
  for (std::size_t i = 0; i < n; ++i) {
    const CustomerSpec& spec = config.fleet[i];
    const CustomerRuntime& cur = fleet.customers[i];
    const Profile& own = cur.state.x;

    Profile others(slots);
    for (std::size_t t = 0; t < slots; ++t) {
      others[t] = rec.price.values[t] - rec.base[t] - own[t];
    }
    const bool inelastic = spec.cls == CustomerClass::Inelastic;
    const PricingPolicy& policy = inelastic ? inelastic_policy : config.pricing;
    Profile grad = gradient_from_price(policy, rec.price.values, own);

    rec.customer_costs.push_back(customer_cost(policy, own, others, rec.base));
    rec.predictions.push_back(cur.last_prediction);
    Profile company_pred = cur.last_prediction;
    for (double& v : company_pred) v *= 2.0;
    rec.company_predictions.push_back(std::move(company_pred));
    rec.h_snapshots.push_back(cur.state.h);
    Profile eps(slots, 0.0);
    if (inelastic) {
      for (std::size_t t = 0; t < slots; ++t) eps[t] = -rec.price.values[t];
    }
    rec.epsilon.push_back(std::move(eps));
    rec.relaxed.push_back(cur.relaxed);

    CustomerRuntime& upd = next.customers[i];
    switch (spec.cls) {
      case CustomerClass::PriceSensitive: {
        upd.predictor.record(grad);
        Profile pred = upd.predictor.predict();
        upd.state = omd_step(cur.state, grad, pred);
        upd.last_prediction = std::move(pred);
        break;
      }
      case CustomerClass::Inelastic:
        upd.state = inelastic_step(cur.state);
        break;
      case CustomerClass::Controllable:
        upd.state = controllable_step(cur.state, grad, day, config.days,
                                      config.relax_days,
                                      spec.relaxed_set.value_or(spec.set));
        upd.relaxed = in_relaxed_phase(day, config.days, config.relax_days);
        break;
    }
    rec.customer_gradients.push_back(std::move(grad));
  }
  return {std::move(next), std::move(rec)};
}

const DayRecord& SimulationTrace::day(int k) const {
  if (k < 1 || k > horizon()) {
    throw Error("trace: day " + std::to_string(k) + " out of range");
  }
  return days[static_cast<std::size_t>(k - 1)];
}

const Profile& SimulationTrace::h_snapshot(int k, std::size_t customer) const {
  if (k == horizon() + 1) return terminal.customers.at(customer).state.h;
  return day(k).h_snapshots.at(customer);
}

SimulationTrace run_scenario(const ScenarioConfig& config) {
  validate(config);
  SimulationTrace trace;
  trace.config = config;
  trace.days.reserve(static_cast<std::size_t>(config.days));
  FleetState fleet = initialize_fleet(config);
  for (int k = 1; k <= config.days; ++k) {
    auto [next, rec] = run_day(fleet, config, k);
    trace.days.push_back(std::move(rec));
    fleet = std::move(next);
  }
  trace.terminal = std::move(fleet);
  return trace;
}

Profile total_load(const SimulationTrace& trace, int day) {
  const DayRecord& rec = trace.day(day);
  return total_load(rec.base, rec.profiles);
}

std::vector<FeasibleSet> original_sets(const ScenarioConfig& config) {
  std::vector<FeasibleSet> sets;
  for (const auto& c : config.fleet) sets.push_back(c.set);
  return sets;
}

std::vector<FeasibleSet> relaxed_sets(const ScenarioConfig& config) {
  std::vector<FeasibleSet> sets;
  for (const auto& c : config.fleet) {
    sets.push_back(c.relaxed_set ? *c.relaxed_set : c.set);
  }
  return sets;
}

std::vector<bool> inelastic_mask(const ScenarioConfig& config) {
  std::vector<bool> mask;
  for (const auto& c : config.fleet) {
    mask.push_back(c.cls == CustomerClass::Inelastic);
  }
  return mask;
}

}  // namespace evcharge
