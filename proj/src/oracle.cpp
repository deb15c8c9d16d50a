#include "evcharge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace evcharge {
namespace {

Stacked zeros_like(const std::vector<FeasibleSet>& sets) {
  Stacked z;
  z.reserve(sets.size());
  for (const auto& s : sets) z.emplace_back(s.slots(), 0.0);
  return z;
}

Profile mean_profile(const std::vector<Profile>& profiles, std::size_t slots) {
  Profile m(slots, 0.0);
  for (const auto& p : profiles) {
    require_length(p, slots, "mean_profile");
    for (std::size_t t = 0; t < slots; ++t) m[t] += p[t];
  }
  for (double& v : m) v /= static_cast<double>(profiles.size());
  return m;
}

// One coordinate of the brute-force grid.
struct GridAxis {
  std::size_t block;
  std::size_t slot;
  double low;
  double up;
};

}  // namespace

SolveResult minimize(const QuadraticObjective& objective,
                     const std::vector<FeasibleSet>& sets,
                     const SolveOptions& options, const Stacked* start) {
  for (const auto& s : sets) validate(s);
  SolveResult r;
  if (start) {
    r.x = *start;
  } else {
    for (const auto& s : sets) r.x.push_back(uniform_feasible(s));
  }
  const double step = 1.0 / objective.lipschitz;
  Stacked grad = zeros_like(sets);
  Stacked trial = r.x;
  SolveResult best;
  best.residual = std::numeric_limits<double>::infinity();

  for (int it = 0; it <= options.max_iter; ++it) {
    r.value = objective.evaluate(r.x, &grad);
    double res2 = 0.0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      Profile shifted = r.x[i];
      for (std::size_t t = 0; t < shifted.size(); ++t) {
        shifted[t] -= step * grad[i][t];
      }
      trial[i] = project(shifted, sets[i]);
      const double d = distance(trial[i], r.x[i]);
      res2 += d * d;
    }
    r.residual = std::sqrt(res2);
    r.iterations = it;
    if (r.residual < best.residual) best = r;
    if (r.residual <= options.tol) return r;
    std::swap(r.x, trial);
  }
  throw MaxIterExceeded(best);
}

Stacked brute_force_small(const QuadraticObjective& objective,
                          const std::vector<FeasibleSet>& sets,
                          double resolution) {
  std::size_t total = 0;
  for (const auto& s : sets) {
    validate(s);
    total += s.slots();
  }
  if (total > 6) {
    throw DimensionTooLarge("brute_force_small: dimension " +
                            std::to_string(total) + " exceeds 6");
  }
  if (!(resolution > 0.0)) throw Error("brute_force_small: bad resolution");

  // Free coordinates are enumerated; a budgeted block leaves its last free
  // coordinate to the budget.
  std::vector<GridAxis> axes;
  std::vector<std::ptrdiff_t> dependent(sets.size(), -1);
  Stacked x;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const FeasibleSet& s = sets[i];
    x.push_back(s.low);
    std::vector<std::size_t> free;
    for (std::size_t t = 0; t < s.slots(); ++t) {
      if (s.low[t] < s.up[t]) free.push_back(t);
    }
    if (s.budget_active && !free.empty()) {
      dependent[i] = static_cast<std::ptrdiff_t>(free.back());
      free.pop_back();
    }
    for (std::size_t t : free) axes.push_back({i, t, s.low[t], s.up[t]});
  }

  constexpr double kRefine = 4.0;
  constexpr int kHalfWindow = 3;
  double width = 0.0;
  for (const auto& a : axes) width = std::max(width, a.up - a.low);
  int levels = 0;
  double step = resolution;
  while (step * 16.0 < width) {
    step *= kRefine;
    ++levels;
  }

  // Completes x from the axis values; false when the budget coordinate
  // leaves its bounds.
  auto complete = [&](Stacked& point) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (dependent[i] < 0) continue;
      const auto d = static_cast<std::size_t>(dependent[i]);
      double rest = sets[i].budget;
      for (std::size_t t = 0; t < point[i].size(); ++t) {
        if (t != d) rest -= point[i][t];
      }
      const double slack = 1e-12 * std::max(1.0, std::abs(sets[i].budget));
      if (rest < sets[i].low[d] - slack || rest > sets[i].up[d] + slack) {
        return false;
      }
      point[i][d] = std::clamp(rest, sets[i].low[d], sets[i].up[d]);
    }
    return true;
  };

  std::vector<double> lo(axes.size()), hi(axes.size()), centre(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) {
    lo[a] = axes[a].low;
    hi[a] = axes[a].up;
  }
  Stacked best_x;
  double best_value = std::numeric_limits<double>::infinity();

  for (int level = levels; level >= 0; --level) {
    std::vector<std::vector<double>> grid(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) {
      for (double v = lo[a];; v += step) {
        if (v >= hi[a] - 1e-12 * step) {
          grid[a].push_back(hi[a]);
          break;
        }
        grid[a].push_back(v);
      }
    }
    std::vector<std::size_t> idx(axes.size(), 0);
    Stacked point = x;
    while (true) {
      for (std::size_t a = 0; a < axes.size(); ++a) {
        point[axes[a].block][axes[a].slot] = grid[a][idx[a]];
      }
      if (complete(point)) {
        const double v = objective.evaluate(point, nullptr);
        if (v < best_value) {
          best_value = v;
          best_x = point;
        }
      }
      std::size_t a = 0;
      for (; a < axes.size(); ++a) {
        if (++idx[a] < grid[a].size()) break;
        idx[a] = 0;
      }
      if (a == axes.size()) break;
    }
    if (best_x.empty()) {
      throw Error("brute_force_small: grid contains no feasible point");
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
      centre[a] = best_x[axes[a].block][axes[a].slot];
      lo[a] = std::max(axes[a].low, centre[a] - kHalfWindow * step);
      hi[a] = std::min(axes[a].up, centre[a] + kHalfWindow * step);
    }
    step /= kRefine;
  }
  return best_x;
}

QuadraticObjective company_objective(const std::vector<Profile>& base_loads,
                                     std::size_t customers) {
  if (base_loads.empty()) throw Error("company_objective: no days");
  const std::size_t slots = base_loads.front().size();
  Profile mean = mean_profile(base_loads, slots);
  double mean_sq = 0.0;
  for (const auto& d : base_loads) mean_sq += squared_norm(d);
  mean_sq /= static_cast<double>(base_loads.size());

  QuadraticObjective obj;
  obj.lipschitz = 2.0 * static_cast<double>(customers);
  // (1/K) sum_k ||D^k + s||^2 = ||s||^2 + 2 mean(D)^T s + mean ||D^k||^2.
  obj.evaluate = [mean = std::move(mean), mean_sq, slots](const Stacked& x,
                                                          Stacked* grad) {
    const Profile s = sum_blocks(x, slots);
    double value = mean_sq;
    for (std::size_t t = 0; t < slots; ++t) {
      value += s[t] * s[t] + 2.0 * mean[t] * s[t];
    }
    if (grad) {
      for (auto& block : *grad) {
        for (std::size_t t = 0; t < slots; ++t) block[t] = 2.0 * (s[t] + mean[t]);
      }
    }
    return value;
  };
  return obj;
}

QuadraticObjective customer_objective(const SimulationTrace& trace,
                                      std::size_t customer) {
  const ScenarioConfig& cfg = trace.config;
  const std::size_t slots = cfg.slots;
  const CustomerSpec& spec = cfg.fleet.at(customer);
  QuadraticObjective obj;
  if (spec.cls == CustomerClass::Inelastic) {
    obj.lipschitz = 1.0;
    obj.evaluate = [r = cfg.pricing.r](const Stacked& x, Stacked* grad) {
      if (grad) {
        for (auto& block : *grad) std::fill(block.begin(), block.end(), 0.0);
      }
      (void)x;
      return r;
    };
    return obj;
  }
  // Linear coefficient: mean over days of (others' realized load + base).
  Profile linear(slots, 0.0);
  for (const DayRecord& rec : trace.days) {
    for (std::size_t t = 0; t < slots; ++t) {
      linear[t] += rec.price.values[t] - rec.profiles[customer][t];
    }
  }
  for (double& v : linear) v /= static_cast<double>(trace.days.size());
  const double own = cfg.pricing.kind == PricingKind::Aligned ? 0.5 : 1.0;
  obj.lipschitz = 2.0 * own;
  obj.evaluate = [linear = std::move(linear), own, slots](const Stacked& x,
                                                          Stacked* grad) {
    const Profile& v = x.front();
    double value = 0.0;
    for (std::size_t t = 0; t < slots; ++t) {
      value += (own * v[t] + linear[t]) * v[t];
    }
    if (grad) {
      for (std::size_t t = 0; t < slots; ++t) {
        (*grad)[0][t] = 2.0 * own * v[t] + linear[t];
      }
    }
    return value;
  };
  return obj;
}

Profile customer_static_optimum(const SimulationTrace& trace,
                                std::size_t customer,
                                const SolveOptions& options) {
  const CustomerSpec& spec = trace.config.fleet.at(customer);
  if (spec.cls == CustomerClass::Inelastic) return uniform_feasible(spec.set);
  return minimize(customer_objective(trace, customer), {spec.set}, options)
      .x.front();
}

namespace {

std::vector<Profile> trace_base_loads(const SimulationTrace& trace) {
  std::vector<Profile> loads;
  loads.reserve(trace.days.size());
  for (const auto& rec : trace.days) loads.push_back(rec.base);
  return loads;
}

}  // namespace

Stacked company_static_optimum(const SimulationTrace& trace,
                               const SolveOptions& options) {
  return minimize(company_objective(trace_base_loads(trace), trace.customers()),
                  original_sets(trace.config), options)
      .x;
}

Stacked relaxed_static_optimum(const SimulationTrace& trace,
                               const SolveOptions& options) {
  return minimize(company_objective(trace_base_loads(trace), trace.customers()),
                  relaxed_sets(trace.config), options)
      .x;
}

Stacked perday_optimum(std::span<const double> base,
                       const std::vector<FeasibleSet>& sets,
                       const SolveOptions& options) {
  return minimize(company_objective({Profile(base.begin(), base.end())},
                                    sets.size()),
                  sets, options)
      .x;
}

std::vector<Stacked> perday_optima(const SimulationTrace& trace,
                                   const SolveOptions& options) {
  const auto sets = original_sets(trace.config);
  std::map<Profile, Stacked> cache;
  std::vector<Stacked> out;
  out.reserve(trace.days.size() + 1);
  for (const auto& rec : trace.days) {
    auto it = cache.find(rec.base);
    if (it == cache.end()) {
      it = cache.emplace(rec.base, perday_optimum(rec.base, sets, options)).first;
    }
    out.push_back(it->second);
  }
  if (!out.empty()) out.push_back(out.back());
  return out;
}

StackedRun run_stacked_company_omd(const ScenarioConfig& config) {
  validate(config);
  const std::size_t n = config.fleet.size();
  const std::size_t slots = config.slots;
  bool averaging = false;
  for (const auto& c : config.fleet) {
    if (c.cls != CustomerClass::PriceSensitive) {
      throw Error("run_stacked_company_omd: every customer must be price-sensitive");
    }
    averaging = c.predictor == PredictorKind::PastGradientAverage;
  }
  const double eta = config.eta_company;

  StackedRun run;
  Stacked x;
  for (const auto& c : config.fleet) x.push_back(uniform_feasible(c.set));
  Stacked h = x;
  Stacked grad_sum = Stacked(n, Profile(slots, 0.0));
  run.h.push_back(h);
  run.x.push_back(x);
  for (int k = 1; k <= config.days; ++k) {
    const Profile d = base_load(config.base_load, k, config.seed);
    const Stacked g = company_cost_gradient(d, x);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < slots; ++t) {
        h[i][t] -= eta * g[i][t];
        grad_sum[i][t] += g[i][t];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      Profile target = h[i];
      if (averaging) {
        for (std::size_t t = 0; t < slots; ++t) {
          target[t] -= eta * (grad_sum[i][t] / static_cast<double>(k));
        }
      }
      x[i] = project(target, config.fleet[i].set);
    }
    run.h.push_back(h);
    run.x.push_back(x);
  }
  return run;
}

}  // namespace evcharge
