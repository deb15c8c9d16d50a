#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evcharge/omd.hpp"
#include "evcharge/pricing.hpp"

namespace evcharge {

enum class CustomerClass { PriceSensitive, Inelastic, Controllable };

const char* to_string(CustomerClass c);

struct CustomerSpec {
  int id = 0;
  CustomerClass cls = CustomerClass::PriceSensitive;
  FeasibleSet set;
  std::optional<FeasibleSet> relaxed_set;  // Controllable only
  double eta = 0.0;
  PredictorKind predictor = PredictorKind::Zero;  // ignored unless PriceSensitive

  friend bool operator==(const CustomerSpec&, const CustomerSpec&) = default;
};

struct BaseLoadModel {
  enum class Kind { Static, Switching, Trace };
  enum class SwitchRule { Alternate, SeededRandom };

  Kind kind = Kind::Static;
  Profile a;  // Static profile, or first switching profile
  Profile b;  // second switching profile
  SwitchRule rule = SwitchRule::Alternate;
  double p = 0.5;  // probability of `a` under SeededRandom
  std::vector<Profile> trace;

  friend bool operator==(const BaseLoadModel&, const BaseLoadModel&) = default;
};

struct ScenarioConfig {
  std::size_t slots = 24;
  int days = 200;        // K
  int relax_days = 0;    // J
  std::vector<CustomerSpec> fleet;
  BaseLoadModel base_load;
  PricingPolicy pricing;  // Natural or Aligned; inelastic customers use r
  double eta_company = 0.0;
  bool coupled_steps = true;  // enforce eta_company = eta_i / 2
  std::uint64_t seed = 0;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ValidationError naming the offending field.
void validate(const ScenarioConfig& config);

/// D^k for 1-based day k; deterministic in (model, day, seed).
Profile base_load(const BaseLoadModel& model, int day, std::uint64_t seed);

struct DayRecord {
  int day = 0;
  Profile base;
  Stacked profiles;
  PriceSignal price;
  Stacked customer_gradients;
  Profile company_gradient_block;   // 2 * price
  Stacked predictions;              // M_i^k used to produce x_i^k
  Stacked company_predictions;      // M_u^k blocks (2 * M_i^k)
  std::vector<double> customer_costs;
  double company_cost = 0.0;
  Stacked h_snapshots;              // h_i^k
  Stacked epsilon;                  // -price for inelastic, zero otherwise
  std::vector<bool> relaxed;        // x_i^k came from the relaxed set
};

struct CustomerRuntime {
  OmdState state;
  Predictor predictor;
  Profile last_prediction;
  bool relaxed = false;
};

struct FleetState {
  std::vector<CustomerRuntime> customers;
};

FleetState initialize_fleet(const ScenarioConfig& config);

/// Records day `day` from the committed profiles in `fleet`, then advances
/// every customer using only the day's broadcast price and its own state.
std::pair<FleetState, DayRecord> run_day(const FleetState& fleet,
                                         const ScenarioConfig& config, int day);

struct SimulationTrace {
  ScenarioConfig config;
  std::vector<DayRecord> days;
  FleetState terminal;  // states for day K + 1 (h^{K+1})

  std::size_t customers() const { return config.fleet.size(); }
  int horizon() const { return static_cast<int>(days.size()); }
  const DayRecord& day(int k) const;  // 1-based
  /// h^k for 1 <= k <= K + 1.
  const Profile& h_snapshot(int k, std::size_t customer) const;
};

SimulationTrace run_scenario(const ScenarioConfig& config);

Profile total_load(const SimulationTrace& trace, int day);

/// Sets used for the comparators: original sets, or relaxed sets for
/// controllable customers.
std::vector<FeasibleSet> original_sets(const ScenarioConfig& config);
std::vector<FeasibleSet> relaxed_sets(const ScenarioConfig& config);

std::vector<bool> inelastic_mask(const ScenarioConfig& config);

}  // namespace evcharge
