#include "evcharge/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace evcharge {
namespace {

double clipped_sum(std::span<const double> h, const FeasibleSet& set,
                   double nu) {
  double s = 0.0;
  for (std::size_t t = 0; t < h.size(); ++t) {
    s += std::clamp(h[t] - nu, set.low[t], set.up[t]);
  }
  return s;
}

Profile clip_shifted(std::span<const double> h, const FeasibleSet& set,
                     double nu) {
  Profile x(h.size());
  for (std::size_t t = 0; t < h.size(); ++t) {
    x[t] = std::clamp(h[t] - nu, set.low[t], set.up[t]);
  }
  return x;
}

// Exact multiplier once the clamping pattern at `nu` is known.
double polish_multiplier(std::span<const double> h, const FeasibleSet& set,
                         double nu) {
  double free_h = 0.0;
  double fixed = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < h.size(); ++t) {
    const double v = h[t] - nu;
    if (v <= set.low[t]) {
      fixed += set.low[t];
    } else if (v >= set.up[t]) {
      fixed += set.up[t];
    } else {
      free_h += h[t];
      ++n_free;
    }
  }
  if (n_free == 0) return nu;
  return (free_h - (set.budget - fixed)) / static_cast<double>(n_free);
}

double solve_multiplier(std::span<const double> h, const FeasibleSet& set,
                        const ProjectionOptions& options) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double scale = std::abs(set.budget);
  for (std::size_t t = 0; t < h.size(); ++t) {
    lo = std::min(lo, h[t] - set.up[t]);
    hi = std::max(hi, h[t] - set.low[t]);
    scale += std::abs(set.low[t]) + std::abs(set.up[t]);
  }
  if (h.empty()) return 0.0;
  const double tol = std::max(
      options.residual_tol, 64.0 * std::numeric_limits<double>::epsilon() *
                                scale);
  // clipped_sum is non-increasing in nu: sum(lo) = sum(up), sum(hi) = sum(low).
  if (!(clipped_sum(h, set, lo) >= set.budget - tol &&
        clipped_sum(h, set, hi) <= set.budget + tol)) {
    throw NoConvergence("project: budget " + std::to_string(set.budget) +
                        " cannot be bracketed");
  }
  double nu = 0.5 * (lo + hi);
  double residual = clipped_sum(h, set, nu) - set.budget;
  for (int it = 0; it < options.max_iterations && std::abs(residual) > tol;
       ++it) {
    if (residual > 0.0) {
      lo = nu;
    } else {
      hi = nu;
    }
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    nu = mid;
    residual = clipped_sum(h, set, nu) - set.budget;
  }
  const double polished = polish_multiplier(h, set, nu);
  const double polished_residual = clipped_sum(h, set, polished) - set.budget;
  if (std::abs(polished_residual) <= std::abs(residual)) {
    nu = polished;
    residual = polished_residual;
  }
  if (!(std::abs(residual) <= std::max(tol, 1e-9 * std::max(1.0, scale)))) {
    throw NoConvergence("project: budget residual " +
                        std::to_string(residual) + " after bisection");
  }
  return nu;
}

void require_finite(std::span<const double> h) {
  for (double v : h) {
    if (!std::isfinite(v)) throw Error("project: non-finite input profile");
  }
}

}  // namespace

FeasibleSet FeasibleSet::window(std::size_t slots, std::size_t first_slot,
                                std::size_t last_slot, double rate_max,
                                std::optional<double> budget) {
  FeasibleSet set;
  set.low.assign(slots, 0.0);
  set.up.assign(slots, 0.0);
  for (std::size_t t = first_slot; t <= last_slot && t <= slots; ++t) {
    if (t >= 1) set.up[t - 1] = rate_max;
  }
  set.budget_active = budget.has_value();
  set.budget = budget.value_or(0.0);
  return set;
}

std::optional<SetViolation> find_violation(const FeasibleSet& set) {
  if (set.low.size() != set.up.size()) return SetViolation::LengthMismatch;
  double sum_low = 0.0;
  double sum_up = 0.0;
  for (std::size_t t = 0; t < set.low.size(); ++t) {
    if (!std::isfinite(set.low[t]) || !std::isfinite(set.up[t])) {
      return SetViolation::NonFinite;
    }
    if (set.low[t] > set.up[t]) return SetViolation::BoundsInverted;
    sum_low += set.low[t];
    sum_up += set.up[t];
  }
  if (!std::isfinite(set.budget)) return SetViolation::NonFinite;
  if (!set.budget_active) {
    if (set.budget != 0.0) return SetViolation::InactiveBudgetNonzero;
    return std::nullopt;
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(sum_up));
  if (set.budget < sum_low - slack || set.budget > sum_up + slack) {
    return SetViolation::EmptySet;
  }
  return std::nullopt;
}

void validate(const FeasibleSet& set) {
  if (auto v = find_violation(set)) {
    std::string detail;
    switch (*v) {
      case SetViolation::EmptySet:
        detail = "budget " + std::to_string(set.budget) +
                 " outside [sum(low), sum(up)]";
        break;
      case SetViolation::BoundsInverted:
        detail = "some low(t) > up(t)";
        break;
      case SetViolation::InactiveBudgetNonzero:
        detail = "inactive budget must be 0";
        break;
      case SetViolation::LengthMismatch:
        detail = "low and up differ in length";
        break;
      case SetViolation::NonFinite:
        detail = "non-finite bound or budget";
        break;
    }
    throw InvalidSet(*v, detail);
  }
}

Profile project(std::span<const double> h, const FeasibleSet& set,
                const ProjectionOptions& options) {
  require_length(h, set.slots(), "project");
  require_finite(h);
  if (!set.budget_active) return clip_shifted(h, set, 0.0);
  return clip_shifted(h, set, solve_multiplier(h, set, options));
}

double budget_multiplier(std::span<const double> h, const FeasibleSet& set) {
  require_length(h, set.slots(), "budget_multiplier");
  if (!set.budget_active) return 0.0;
  return solve_multiplier(h, set, {});
}

Profile uniform_feasible(const FeasibleSet& set) {
  const std::size_t n = set.slots();
  Profile start(n);
  for (std::size_t t = 0; t < n; ++t) {
    start[t] = set.budget_active ? set.budget / static_cast<double>(n)
                                 : 0.5 * (set.low[t] + set.up[t]);
  }
  return project(start, set);
}

double diameter_bound(const FeasibleSet& set) {
  return distance(set.up, set.low);
}

bool contains(std::span<const double> x, const FeasibleSet& set, double tol) {
  if (x.size() != set.slots()) return false;
  double total = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (!(x[t] >= set.low[t] - tol && x[t] <= set.up[t] + tol)) return false;
    total += x[t];
  }
  return !set.budget_active || std::abs(total - set.budget) <= tol;
}

RelaxationPlan RelaxationPlan::drop_budget() { return {}; }

RelaxationPlan RelaxationPlan::widen(Profile low, Profile up) {
  RelaxationPlan plan;
  plan.kind = Kind::WidenWindow;
  plan.low = std::move(low);
  plan.up = std::move(up);
  return plan;
}

RelaxationPlan RelaxationPlan::replace_with(FeasibleSet set) {
  RelaxationPlan plan;
  plan.kind = Kind::Custom;
  plan.custom = std::move(set);
  return plan;
}

bool is_relaxation_of(const FeasibleSet& outer, const FeasibleSet& inner) {
  if (outer.slots() != inner.slots()) return false;
  for (std::size_t t = 0; t < inner.slots(); ++t) {
    if (outer.low[t] > inner.low[t] || outer.up[t] < inner.up[t]) return false;
  }
  if (!outer.budget_active) return true;
  // A budget hyperplane only contains the inner set when it is the same one.
  return inner.budget_active && inner.budget == outer.budget;
}

FeasibleSet relax(const FeasibleSet& set, const RelaxationPlan& plan) {
  validate(set);
  FeasibleSet out;
  switch (plan.kind) {
    case RelaxationPlan::Kind::DropBudget:
      out = set;
      out.budget_active = false;
      out.budget = 0.0;
      break;
    case RelaxationPlan::Kind::WidenWindow:
      out = set;
      out.low = plan.low;
      out.up = plan.up;
      break;
    case RelaxationPlan::Kind::Custom:
      if (!plan.custom) throw NotARelaxation("relax: custom plan has no set");
      out = *plan.custom;
      break;
  }
  if (auto v = find_violation(out)) {
    throw NotARelaxation(std::string("relax: relaxed set invalid (") +
                         to_string(*v) + ")");
  }
  if (!is_relaxation_of(out, set)) {
    throw NotARelaxation("relax: original set is not contained in the result");
  }
  return out;
}

HalfSquareRange half_square_range(const FeasibleSet& set) {
  validate(set);
  HalfSquareRange range;
  const Profile origin(set.slots(), 0.0);
  range.min = 0.5 * squared_norm(project(origin, set));

  const std::size_t n = set.slots();
  if (!set.budget_active) {
    for (std::size_t t = 0; t < n; ++t) {
      range.max += 0.5 * std::max(set.low[t] * set.low[t],
                                  set.up[t] * set.up[t]);
    }
    return range;
  }

  // The maximum of a convex function over box-and-hyperplane sits at a
  // vertex: every free coordinate at a bound except at most one.
  std::vector<std::size_t> free;
  double base = 0.0;
  double spare = set.budget;
  for (std::size_t t = 0; t < n; ++t) {
    base += 0.5 * set.low[t] * set.low[t];
    spare -= set.low[t];
    if (set.low[t] < set.up[t]) free.push_back(t);
  }
  const std::size_t m = free.size();
  if (m == 0) {
    range.max = base;
    return range;
  }

  bool identical = true;
  for (std::size_t j : free) {
    identical = identical && set.low[j] == set.low[free[0]] &&
                set.up[j] == set.up[free[0]];
  }

  const double slack = 1e-12 * std::max(1.0, std::abs(set.budget));
  if (m <= 16) {
    double best = -std::numeric_limits<double>::infinity();
    const std::uint32_t masks = 1u << m;
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      double used = 0.0;
      double gain = 0.0;
      for (std::size_t b = 0; b < m; ++b) {
        if (mask & (1u << b)) {
          const std::size_t t = free[b];
          used += set.up[t] - set.low[t];
          gain += 0.5 * (set.up[t] * set.up[t] - set.low[t] * set.low[t]);
        }
      }
      const double rest = spare - used;
      for (std::size_t b = 0; b < m; ++b) {
        if (mask & (1u << b)) continue;
        const std::size_t t = free[b];
        if (rest < -slack || rest > set.up[t] - set.low[t] + slack) continue;
        const double xj = set.low[t] + std::clamp(rest, 0.0,
                                                  set.up[t] - set.low[t]);
        best = std::max(best, gain + 0.5 * (xj * xj - set.low[t] * set.low[t]));
      }
      if (mask == masks - 1 && std::abs(rest) <= slack) {
        best = std::max(best, gain);
      }
    }
    range.max = base + best;
    return range;
  }

  if (identical) {
    // Identical free bounds: the greedy vertex majorizes every other point.
    const double lo = set.low[free[0]];
    const double width = set.up[free[0]] - lo;
    const double full = std::floor(spare / width);
    const auto n_full = static_cast<std::size_t>(std::clamp(
        full, 0.0, static_cast<double>(m)));
    const double rest = std::max(0.0, spare - static_cast<double>(n_full) * width);
    double value = base + static_cast<double>(n_full) * 0.5 *
                              ((lo + width) * (lo + width) - lo * lo);
    if (n_full < m) {
      const double xj = lo + std::min(rest, width);
      value += 0.5 * (xj * xj - lo * lo);
    }
    range.max = value;
    return range;
  }

  for (std::size_t t = 0; t < n; ++t) {
    range.max += 0.5 * std::max(set.low[t] * set.low[t], set.up[t] * set.up[t]);
  }
  range.max_exact = false;
  return range;
}

double max_norm(const FeasibleSet& set) {
  return std::sqrt(2.0 * half_square_range(set).max);
}

}  // namespace evcharge
