#pragma once

#include <string>
#include <vector>

#include "evcharge/oracle.hpp"

namespace evcharge {

/// Regrets at every prefix K' = 1..K of the trace (index K' - 1).
std::vector<double> static_regret_customer(const SimulationTrace& trace,
                                           std::size_t customer,
                                           const Profile& x_star);
std::vector<double> static_regret_company(const SimulationTrace& trace,
                                          const Stacked& x_star);
/// `perday` holds at least K per-day optima.
std::vector<double> tracking_regret(const SimulationTrace& trace,
                                    const std::vector<Stacked>& perday);

/// P_i / eta_i + (eta_i / 2) sum_k ||grad c_i^k - M_i^k||^2.
std::vector<double> static_bound_customer(const SimulationTrace& trace,
                                          std::size_t customer);

/// P_u / eta_u + (eta_u / 2) sum_k ||grad c_u^k - M_u^k||^2; the prediction
/// term is dropped when `ignore_predictions` is set.
std::vector<double> static_bound_company(const SimulationTrace& trace,
                                         bool ignore_predictions = false);

/// The tracking bound split by its dependence on the step size:
/// bound(eta) = (endpoint + path) / eta + (eta / 2) * prediction.
struct TrackingBoundTerms {
  std::vector<double> endpoint;    // L and grad-L terms at h^1 and h^{K+1}
  std::vector<double> path;        // max_k ||h^k|| * sum_k ||x^{k*} - x^{k+1*}||
  std::vector<double> prediction;  // sum_k ||grad c_u^k - M_u^k||^2

  std::vector<double> evaluate(double eta) const;
};

/// `perday` holds K + 1 per-day optima (see perday_optima).
TrackingBoundTerms tracking_bound_terms(const SimulationTrace& trace,
                                        const std::vector<Stacked>& perday);
std::vector<double> tracking_bound(const SimulationTrace& trace,
                                   const std::vector<Stacked>& perday);

/// epsilon_i^k = -(D^k + sum_j x_j^k) for inelastic i, zero otherwise.
Stacked epsilon_terms(const DayRecord& record,
                      const std::vector<bool>& inelastic);

/// P_u / eta_u + (eta_u / 2) sum_k ||grad c_u^k + eps^k||^2
///   + K sum_{i inelastic} diam(F_i) max_k ||eps_i^k||.
std::vector<double> inelastic_bound(const SimulationTrace& trace);

/// The limit of inelastic_bound / K: sum_{i inelastic} diam(F_i) ||eps_i||.
double inelastic_plateau(const SimulationTrace& trace);

struct RelaxationCheck {
  double lhs = 0.0;     // two-sum left side of the condition
  bool holds = false;   // lhs <= 0
  double relaxation_gain = 0.0;  // sum_{k > K-J} c_u^k(x*) - c_u^k(x~*)
  double norm_cost = 0.0;        // norm-bound right side of the surrogate
  bool surrogate_holds = false;  // gain >= norm_cost
};

RelaxationCheck relaxation_condition(const SimulationTrace& trace,
                                     const Stacked& x_star,
                                     const Stacked& x_tilde_star);

/// Company bound with P_u before day K - J and P~_u after it.
std::vector<double> relaxation_bound(const SimulationTrace& trace);

/// P_i for every customer, P_u = sum P_i, P~_u over the relaxed sets.
struct SpreadTerms {
  std::vector<double> customer;
  double company = 0.0;
  double company_relaxed = 0.0;
  bool exact = true;
};

SpreadTerms spread_terms(const ScenarioConfig& config);

struct Comparators {
  Stacked x_star;
  Stacked x_customer_star;  // x_i^* of each customer
  std::vector<Stacked> perday;  // K + 1 entries
  Stacked x_tilde_star;         // empty unless some customer is controllable
};

Comparators compute_comparators(const SimulationTrace& trace,
                                const SolveOptions& options = {});

struct BoundCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  double worst_margin = 0.0;  // min over K of bound - regret
  int worst_day = 0;
};

struct RegretReport {
  int horizon = 0;
  std::vector<std::vector<double>> customer_regret;
  std::vector<double> company_regret;
  std::vector<double> tracking;
  std::vector<double> company_average;
  std::vector<double> tracking_average;
  std::vector<double> mean_customer_average;  // mean_i R_i(K)/K

  std::vector<std::vector<double>> customer_bound;  // P_i / eta_i + prediction term
  std::vector<double> company_bound;                // P_u / eta_u + prediction term
  std::vector<double> company_bound_no_prediction;
  std::vector<double> tracking_bound;
  std::vector<double> inelastic_bound;
  std::vector<double> relaxation_bound;  // empty when J = 0

  SpreadTerms spread;
  RelaxationCheck relaxation;
  bool next_day_optimum_duplicated = true;

  std::vector<BoundCheck> checks;
  bool all_checks_passed() const;

  /// Company bound matching the scenario: the static bound, the inelastic bound, or
  /// the relaxation bound.
  const std::vector<double>& applicable_company_bound() const;
};

RegretReport build_report(const SimulationTrace& trace,
                          const Comparators& comparators);

}  // namespace evcharge
