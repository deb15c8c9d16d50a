#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "evcharge/profile.hpp"

namespace evcharge {

/// Charging polytope of one customer: per-slot box bounds plus an optional
/// total-energy equality. Charging windows are expressed by low = up = 0
/// outside the window.
struct FeasibleSet {
  Profile low;
  Profile up;
  bool budget_active = false;
  double budget = 0.0;  // must be 0 when budget_active is false

  std::size_t slots() const { return low.size(); }

  /// Box [0, rate_max] on the 1-based inclusive slot range
  /// [first_slot, last_slot], zero elsewhere.
  static FeasibleSet window(std::size_t slots, std::size_t first_slot,
                            std::size_t last_slot, double rate_max,
                            std::optional<double> budget);

  friend bool operator==(const FeasibleSet&, const FeasibleSet&) = default;
};

std::optional<SetViolation> find_violation(const FeasibleSet& set);

/// Throws InvalidSet naming the first violated invariant.
void validate(const FeasibleSet& set);

struct ProjectionOptions {
  double residual_tol = 1e-12;
  int max_iterations = 200;
};

/// Euclidean projection of h onto the set. With an active budget the result
/// is clip(h - nu, low, up) where the scalar nu is located by bisection and
/// then polished on the identified free coordinates.
Profile project(std::span<const double> h, const FeasibleSet& set,
                const ProjectionOptions& options = {});

/// Multiplier nu of the budget constraint at the projection of h (0 when the
/// budget is inactive). Exposed for optimality checks.
double budget_multiplier(std::span<const double> h, const FeasibleSet& set);

/// The uniform initial profile, repaired onto the set by projection.
Profile uniform_feasible(const FeasibleSet& set);

/// ||up - low||: an upper bound on the set's diameter (loose when the budget
/// hyperplane cuts the box).
double diameter_bound(const FeasibleSet& set);

bool contains(std::span<const double> x, const FeasibleSet& set, double tol);

struct RelaxationPlan {
  enum class Kind { DropBudget, WidenWindow, Custom };
  Kind kind = Kind::DropBudget;
  Profile low;  // WidenWindow only
  Profile up;   // WidenWindow only
  std::optional<FeasibleSet> custom;

  static RelaxationPlan drop_budget();
  static RelaxationPlan widen(Profile low, Profile up);
  static RelaxationPlan replace_with(FeasibleSet set);
};

/// Throws NotARelaxation unless the original set is contained in the result.
FeasibleSet relax(const FeasibleSet& set, const RelaxationPlan& plan);

/// True when `outer` contains every point of `inner`.
bool is_relaxation_of(const FeasibleSet& outer, const FeasibleSet& inner);

/// Range of 0.5*||x||^2 over the set. `max_exact` is false when the maximum
/// is replaced by the box bound (budgeted sets with many heterogeneous free
/// coordinates).
struct HalfSquareRange {
  double min = 0.0;
  double max = 0.0;
  bool max_exact = true;
  double spread() const { return max - min; }
};

HalfSquareRange half_square_range(const FeasibleSet& set);

/// Largest ||x|| over the set, from half_square_range.
double max_norm(const FeasibleSet& set);

}  // namespace evcharge
