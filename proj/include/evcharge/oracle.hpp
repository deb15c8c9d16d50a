#pragma once

#include <functional>
#include <vector>

#include "evcharge/simulation.hpp"

namespace evcharge {

/// Convex quadratic over a stacked decision. `evaluate` returns the value
/// and, when `grad` is non-null, writes the gradient (pre-sized like x).
struct QuadraticObjective {
  std::function<double(const Stacked& x, Stacked* grad)> evaluate;
  double lipschitz = 1.0;
};

struct SolveResult {
  Stacked x;
  double value = 0.0;
  double residual = 0.0;  // ||x - P(x - grad / L)||
  int iterations = 0;
};

class MaxIterExceeded : public Error {
 public:
  explicit MaxIterExceeded(SolveResult best)
      : Error("minimize: iteration cap reached, residual " +
              std::to_string(best.residual)),
        best_(std::move(best)) {}
  const SolveResult& best() const { return best_; }

 private:
  SolveResult best_;
};

struct SolveOptions {
  double tol = 1e-9;
  int max_iter = 100000;
};

/// Projected gradient with fixed step 1/L from `start` (uniform_feasible of
/// each set when omitted). Ties along flat directions resolve to whichever
/// minimizer that start reaches.
SolveResult minimize(const QuadraticObjective& objective,
                     const std::vector<FeasibleSet>& sets,
                     const SolveOptions& options = {},
                     const Stacked* start = nullptr);

/// Exhaustive grid search (coarse-to-fine windows, final step `resolution`).
/// Budgeted sets are enumerated on their hyperplane. Total dimension <= 6.
Stacked brute_force_small(const QuadraticObjective& objective,
                          const std::vector<FeasibleSet>& sets,
                          double resolution);

/// Day-averaged company cost (1/K) sum_k c_u^k for the given base loads.
QuadraticObjective company_objective(const std::vector<Profile>& base_loads,
                                     std::size_t customers);

/// Day-averaged customer cost with the other customers frozen at their
/// realized trajectories.
QuadraticObjective customer_objective(const SimulationTrace& trace,
                                      std::size_t customer);

/// x_i^*: hindsight minimizer of sum_k c_i^k over F_i.
Profile customer_static_optimum(const SimulationTrace& trace,
                                std::size_t customer,
                                const SolveOptions& options = {});

/// x^*: hindsight minimizer of sum_k c_u^k over F_1 x ... x F_N.
Stacked company_static_optimum(const SimulationTrace& trace,
                               const SolveOptions& options = {});

/// x~^*: the same over the relaxed sets of controllable customers.
Stacked relaxed_static_optimum(const SimulationTrace& trace,
                               const SolveOptions& options = {});

/// x^{k*}: minimizer of one day's company cost.
Stacked perday_optimum(std::span<const double> base,
                       const std::vector<FeasibleSet>& sets,
                       const SolveOptions& options = {});

/// Per-day optima for days 1..K+1; day K+1 reuses day K's base load.
/// Days with identical base loads share one solve.
std::vector<Stacked> perday_optima(const SimulationTrace& trace,
                                   const SolveOptions& options = {});

/// Company OMD run on the stacked N*T decision with step eta_company and
/// company gradients, written independently of the per-customer engine.
/// Every customer must be price-sensitive.
struct StackedRun {
  std::vector<Stacked> h;  // h_u^k, k = 1..K+1
  std::vector<Stacked> x;  // x^k, k = 1..K+1
};

StackedRun run_stacked_company_omd(const ScenarioConfig& config);

}  // namespace evcharge
