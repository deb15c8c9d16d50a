#include "evcharge/omd.hpp"

#include <string>

namespace evcharge {

void Predictor::record(std::span<const double> gradient) {
  if (sum_.empty() && count_ == 0) sum_.assign(gradient.size(), 0.0);
  require_length(gradient, sum_.size(), "Predictor::record");
  for (std::size_t t = 0; t < sum_.size(); ++t) sum_[t] += gradient[t];
  ++count_;
}

Profile Predictor::predict(std::span<const double> perfect) const {
  switch (kind_) {
    case PredictorKind::Zero:
      return Profile(sum_.size(), 0.0);
    case PredictorKind::PastGradientAverage: {
      Profile m(sum_.size(), 0.0);
      if (count_ == 0) return m;
      const double n = static_cast<double>(count_);
      for (std::size_t t = 0; t < m.size(); ++t) m[t] = sum_[t] / n;
      return m;
    }
    case PredictorKind::Perfect:
      if (perfect.empty() && !sum_.empty()) {
        throw Error("Predictor: perfect mode needs the current gradient");
      }
      return Profile(perfect.begin(), perfect.end());
  }
  return {};
}

OmdState initial_state(const FeasibleSet& set, double eta) {
  validate(set);
  if (!(eta > 0.0)) throw Error("initial_state: step size must be positive");
  OmdState s;
  s.x = uniform_feasible(set);
  s.h = s.x;
  s.eta = eta;
  s.set = set;
  return s;
}

OmdState omd_step_onto(const OmdState& state, std::span<const double> gradient,
                       std::span<const double> prediction,
                       const FeasibleSet& target) {
  const std::size_t n = state.h.size();
  require_length(gradient, n, "omd_step gradient");
  require_length(prediction, n, "omd_step prediction");
  OmdState next = state;
  Profile shifted(n);
  for (std::size_t t = 0; t < n; ++t) {
    next.h[t] = state.h[t] - state.eta * gradient[t];
    shifted[t] = next.h[t] - state.eta * prediction[t];
  }
  next.x = project(shifted, target);
  return next;
}

OmdState omd_step(const OmdState& state, std::span<const double> gradient,
                  std::span<const double> prediction) {
  return omd_step_onto(state, gradient, prediction, state.set);
}

OmdState inelastic_step(const OmdState& state) { return state; }

bool in_relaxed_phase(int day, int horizon, int relax_days) {
  return day > horizon - relax_days;
}

OmdState controllable_step(const OmdState& state,
                           std::span<const double> gradient, int day,
                           int horizon, int relax_days,
                           const FeasibleSet& relaxed) {
  if (day < 1 || day > horizon) {
    throw Error("controllable_step: day " + std::to_string(day) +
                " outside [1, " + std::to_string(horizon) + "]");
  }
  const Profile zero(state.h.size(), 0.0);
  if (in_relaxed_phase(day, horizon, relax_days)) {
    return omd_step_onto(state, gradient, zero, relaxed);
  }
  return omd_step_onto(state, gradient, zero, state.set);
}

}  // namespace evcharge
