#pragma once

#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "evcharge/config.hpp"

namespace evcharge::fx {

inline const nlohmann::json& oracle_values() {
  static const nlohmann::json values = [] {
    std::ifstream in(std::string(EVCHARGE_TEST_DATA) + "/oracle_values.json");
    return nlohmann::json::parse(in);
  }();
  return values;
}

inline Profile to_profile(const nlohmann::json& j) {
  return j.get<std::vector<double>>();
}

inline std::string preset(const std::string& name) {
  return std::string(EVCHARGE_PRESET_DIR) + "/" + name + ".cfg";
}

inline FeasibleSet box(Profile low, Profile up, std::optional<double> budget) {
  FeasibleSet s{std::move(low), std::move(up), budget.has_value(), budget.value_or(0.0)};
  return s;
}

/// Random budgeted box with `slots` coordinates.
inline FeasibleSet random_set(std::mt19937_64& rng, std::size_t slots, bool budgeted) {
  std::uniform_real_distribution<double> lo(-1.0, 1.0), width(0.1, 2.0), frac(0.0, 1.0);
  FeasibleSet s;
  double sl = 0.0, su = 0.0;
  for (std::size_t t = 0; t < slots; ++t) {
    s.low.push_back(lo(rng));
    s.up.push_back(s.low.back() + width(rng));
    sl += s.low.back();
    su += s.up.back();
  }
  if (budgeted) {
    s.budget_active = true;
    s.budget = sl + frac(rng) * (su - sl);
  }
  return s;
}

inline Profile random_profile(std::mt19937_64& rng, std::size_t slots, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Profile p(slots);
  for (auto& v : p) v = d(rng);
  return p;
}

/// A small all-price-sensitive scenario with a static base load.
inline ScenarioConfig small_config(int customers, int days, PredictorKind pred) {
  ScenarioConfig cfg;
  cfg.slots = 4;
  cfg.days = days;
  cfg.base_load.a = {3.0, 1.0, 0.5, 2.0};
  for (int i = 0; i < customers; ++i) {
    CustomerSpec c;
    c.id = i;
    c.set = box({0, 0, 0, 0}, {1.5, 1.5, 1.5, 1.5}, 2.0);
    c.eta = 0.2;
    c.predictor = pred;
    cfg.fleet.push_back(c);
  }
  cfg.eta_company = 0.1;
  return cfg;
}

}  // namespace evcharge::fx
