#pragma once

#include <span>

#include "evcharge/feasible_set.hpp"

namespace evcharge {

enum class PredictorKind { Zero, PastGradientAverage, Perfect };

/// Gradient prediction M^k. PastGradientAverage keeps the running sum of
/// every gradient recorded so far; Perfect echoes a supplied gradient and is
/// only meaningful in tests.
class Predictor {
 public:
  explicit Predictor(PredictorKind kind = PredictorKind::Zero,
                     std::size_t slots = 0)
      : kind_(kind), sum_(slots, 0.0) {}

  PredictorKind kind() const { return kind_; }
  std::size_t count() const { return count_; }

  void record(std::span<const double> gradient);

  /// `perfect` is read only in Perfect mode and must then be supplied.
  Profile predict(std::span<const double> perfect = {}) const;

 private:
  PredictorKind kind_;
  Profile sum_;
  std::size_t count_ = 0;
};

struct OmdState {
  Profile h;  // intermediate (mirror) iterate
  Profile x;  // committed profile
  double eta = 0.0;
  FeasibleSet set;
};

/// Initial state: x = uniform_feasible(set), h = x.
OmdState initial_state(const FeasibleSet& set, double eta);

/// h' = h - eta * gradient; x' = project(h' - eta * prediction, set).
OmdState omd_step(const OmdState& state, std::span<const double> gradient,
                  std::span<const double> prediction);

/// Same update, projecting onto `target` instead of state.set.
OmdState omd_step_onto(const OmdState& state, std::span<const double> gradient,
                       std::span<const double> prediction,
                       const FeasibleSet& target);

/// Inelastic customers never move.
OmdState inelastic_step(const OmdState& state);

/// True when the step taken at the end of `day` projects onto the relaxed
/// set, i.e. day > horizon - relax_days.
bool in_relaxed_phase(int day, int horizon, int relax_days);

/// Controllable-customer update: zero prediction, projection onto state.set
/// while day <= horizon - relax_days and onto `relaxed` afterwards.
OmdState controllable_step(const OmdState& state,
                           std::span<const double> gradient, int day,
                           int horizon, int relax_days,
                           const FeasibleSet& relaxed);

}  // namespace evcharge
