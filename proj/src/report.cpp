#include "evcharge/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "evcharge/config.hpp"

namespace evcharge {
namespace fs = std::filesystem;

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) {
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out_ << ',';
      out_ << cells[c];
    }
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string num(double v) { return format_number(v); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("cannot create output directory " + dir.string() + ": " +
                ec.message());
  }
}

OutputFile write_file(const fs::path& dir, const std::string& name,
                      const std::string& contents) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw Error("write failed for " + path.string());
  return {name, fnv1a64_hex(contents), contents.size()};
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config"] = m.config_path;
  j["out_dir"] = m.out_dir;
  j["seed"] = m.seed;
  j["checks_passed"] = m.checks_passed;
  j["wall_seconds"] = m.wall_seconds;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : m.files) {
    files.push_back({{"name", f.name}, {"fnv1a64", f.digest}, {"bytes", f.bytes}});
  }
  j["files"] = files;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
  out << j.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Profile total_of(const Stacked& profiles, std::span<const double> base) {
  Profile t(base.begin(), base.end());
  for (const auto& x : profiles) {
    for (std::size_t s = 0; s < t.size(); ++s) t[s] += x[s];
  }
  return t;
}

std::string regret_csv(const RegretReport& r) {
  CsvWriter csv({"day", "R_u", "R_u_avg", "R_tracking", "bound_static",
                 "bound_tracking", "mean_R_i_avg"});
  const auto& bound = r.applicable_company_bound();
  for (int k = 1; k <= r.horizon; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    csv.row({std::to_string(k), num(r.company_regret[i]), num(r.company_average[i]),
             num(r.tracking[i]), num(bound[i]), num(r.tracking_bound[i]),
             num(r.mean_customer_average[i])});
  }
  return csv.str();
}

std::string load_profiles_csv(const Evaluation& ev) {
  const SimulationTrace& tr = ev.trace;
  const int K = tr.horizon();
  const Profile first = total_load(tr, 1);
  const Profile last = total_load(tr, K);
  const DayRecord& final_day = tr.day(K);
  const Profile oracle =
      total_of(ev.comparators.perday[static_cast<std::size_t>(K - 1)], final_day.base);
  CsvWriter csv({"slot", "base", "total_day1", "total_dayK", "oracle_total"});
  for (std::size_t s = 0; s < tr.config.slots; ++s) {
    csv.row({std::to_string(s + 1), num(final_day.base[s]), num(first[s]),
             num(last[s]), num(oracle[s])});
  }
  return csv.str();
}

std::string trace_csv(const SimulationTrace& tr) {
  CsvWriter csv({"day", "customer", "slot", "rate"});
  for (const auto& rec : tr.days) {
    for (std::size_t i = 0; i < rec.profiles.size(); ++i) {
      for (std::size_t s = 0; s < rec.profiles[i].size(); ++s) {
        csv.row({std::to_string(rec.day), std::to_string(i), std::to_string(s + 1),
                 num(rec.profiles[i][s])});
      }
    }
  }
  return csv.str();
}

void print_checks(const RegretReport& r, std::ostream& log) {
  for (const auto& c : r.checks) {
    if (!c.applicable) {
      log << "SKIP " << c.name << " (not applicable)\n";
      continue;
    }
    log << (c.passed ? "PASS " : "FAIL ") << c.name
        << " worst_margin=" << format_number(c.worst_margin)
        << " day=" << c.worst_day << '\n';
  }
}

}  // namespace

Evaluation evaluate(const ScenarioConfig& config) {
  Evaluation ev;
  ev.trace = run_scenario(config);
  ev.comparators = compute_comparators(ev.trace);
  ev.report = build_report(ev.trace, ev.comparators);
  return ev;
}

namespace {

RunManifest write_run(const Evaluation& ev, const std::string& config_path,
                      const fs::path& out_dir, std::ostream& log) {
  RunManifest m;
  m.command = "run";
  m.config_path = config_path;
  m.out_dir = out_dir.string();
  m.seed = ev.trace.config.seed;
  m.files.push_back(write_file(out_dir, "regret.csv", regret_csv(ev.report)));
  m.files.push_back(write_file(out_dir, "load_profiles.csv", load_profiles_csv(ev)));
  m.files.push_back(write_file(out_dir, "trace.csv", trace_csv(ev.trace)));
  m.checks_passed = ev.report.all_checks_passed();
  print_checks(ev.report, log);
  return m;
}

}  // namespace

RunManifest run_command(const ScenarioConfig& config,
                        const std::string& config_path, const fs::path& out_dir,
                        std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  ensure_dir(out_dir);
  RunManifest m = write_run(evaluate(config), config_path, out_dir, log);
  m.wall_seconds = seconds_since(start);
  write_manifest(out_dir, m);
  return m;
}

RunManifest oracle_command(const ScenarioConfig& config,
                           const std::string& config_path, const std::string& which,
                           const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  if (which != "x_star" && which != "x_i_star" && which != "perday" &&
      which != "relaxed") {
    throw ValidationError("which", "must be x_star, x_i_star, perday or relaxed");
  }
  if (which == "relaxed" && relaxed_sets(config) == original_sets(config)) {
    throw ValidationError("which", "scenario has no relaxed sets");
  }
  ensure_dir(out_dir);
  const SimulationTrace trace = run_scenario(config);
  const int K = trace.horizon();
  const std::size_t n = trace.customers();

  std::vector<Profile> bases;
  for (const auto& rec : trace.days) bases.push_back(rec.base);
  const QuadraticObjective company = company_objective(bases, n);

  CsvWriter profiles({"day", "customer", "slot", "rate"});
  CsvWriter costs({"day", "customer", "cost"});
  auto emit = [&](const std::string& day, std::size_t i, const Profile& x) {
    for (std::size_t s = 0; s < x.size(); ++s) {
      profiles.row({day, std::to_string(i), std::to_string(s + 1), num(x[s])});
    }
  };

  if (which == "x_star" || which == "relaxed") {
    const Stacked x = which == "x_star" ? company_static_optimum(trace)
                                        : relaxed_static_optimum(trace);
    for (std::size_t i = 0; i < n; ++i) emit("all", i, x[i]);
    // Day-averaged company cost, and the cost on every realized day.
    costs.row({"all", "company", num(company.evaluate(x, nullptr))});
    for (const auto& rec : trace.days) {
      costs.row({std::to_string(rec.day), "company", num(company_cost(rec.base, x))});
    }
  } else if (which == "x_i_star") {
    for (std::size_t i = 0; i < n; ++i) {
      const Profile x = customer_static_optimum(trace, i);
      emit("all", i, x);
      Stacked single{x};
      costs.row({"all", std::to_string(i),
                 num(customer_objective(trace, i).evaluate(single, nullptr))});
    }
  } else {
    const std::vector<Stacked> perday = perday_optima(trace);
    for (int k = 1; k <= K; ++k) {
      const Stacked& x = perday[static_cast<std::size_t>(k - 1)];
      for (std::size_t i = 0; i < n; ++i) emit(std::to_string(k), i, x[i]);
      costs.row({std::to_string(k), "company",
                 num(company_cost(trace.day(k).base, x))});
    }
  }

  RunManifest m;
  m.command = "oracle " + which;
  m.config_path = config_path;
  m.out_dir = out_dir.string();
  m.seed = config.seed;
  m.files.push_back(write_file(out_dir, "oracle_" + which + ".csv", profiles.str()));
  m.files.push_back(write_file(out_dir, "oracle_" + which + "_cost.csv", costs.str()));
  m.wall_seconds = seconds_since(start);
  write_manifest(out_dir, m);
  return m;
}

std::vector<std::string> figure_presets() {
  return {"fig1_2", "fig3_4_5", "fig6", "fig7"};
}

std::vector<std::string> preset_configs(const std::string& preset) {
  if (preset == "fig1_2") return {"fig1_static", "fig2_static_prediction"};
  if (preset == "fig3_4_5") return {"fig3_switching", "fig4_switching_prediction"};
  if (preset == "fig6") {
    return {"fig6_inelastic_0", "fig6_inelastic_5", "fig6_inelastic_10",
            "fig6_inelastic_15"};
  }
  if (preset == "fig7") {
    return {"fig7_baseline", "fig7_relaxation_1", "fig7_relaxation_2"};
  }
  throw UnknownPreset("unknown figure preset '" + preset + "'");
}

RunManifest figures_command(const std::string& preset, const fs::path& preset_dir,
                            const fs::path& out_dir, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> members = preset_configs(preset);
  ensure_dir(out_dir);

  RunManifest m;
  m.command = "figures " + preset;
  m.config_path = preset_dir.string();
  m.out_dir = out_dir.string();

  std::vector<Evaluation> runs;
  for (const auto& name : members) {
    const fs::path cfg_path = preset_dir / (name + ".cfg");
    const ScenarioConfig cfg = load_config(cfg_path);
    log << "== " << name << '\n';
    runs.push_back(evaluate(cfg));
    ensure_dir(out_dir / name);
    const RunManifest sub = write_run(runs.back(), cfg_path.string(), out_dir / name, log);
    for (const auto& f : sub.files) {
      m.files.push_back({name + "/" + f.name, f.digest, f.bytes});
    }
    m.checks_passed = m.checks_passed && sub.checks_passed;
  }

  // Combined per-day averages across the member runs.
  {
    std::vector<std::string> header{"day"};
    for (const auto& name : members) {
      header.push_back(name + "_R_u_avg");
      header.push_back(name + "_R_tracking_avg");
      header.push_back(name + "_mean_R_i_avg");
    }
    CsvWriter csv(header);
    const int K = runs.front().report.horizon;
    for (int k = 1; k <= K; ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      std::vector<std::string> row{std::to_string(k)};
      for (const auto& ev : runs) {
        row.push_back(num(ev.report.company_average[i]));
        row.push_back(num(ev.report.tracking_average[i]));
        row.push_back(num(ev.report.mean_customer_average[i]));
      }
      csv.row(row);
    }
    m.files.push_back(write_file(out_dir, "average_regret.csv", csv.str()));
  }

  // Final-day total loads next to the base load and the per-day optimum of
  // the first member.
  {
    std::vector<std::string> header{"slot", "base", "optimal"};
    for (const auto& name : members) header.push_back(name);
    CsvWriter csv(header);
    const SimulationTrace& ref = runs.front().trace;
    const int K = ref.horizon();
    const Profile& base = ref.day(K).base;
    const Profile optimal =
        total_of(runs.front().comparators.perday[static_cast<std::size_t>(K - 1)], base);
    std::vector<Profile> totals;
    for (const auto& ev : runs) totals.push_back(total_load(ev.trace, K));
    for (std::size_t s = 0; s < base.size(); ++s) {
      std::vector<std::string> row{std::to_string(s + 1), num(base[s]), num(optimal[s])};
      for (const auto& t : totals) row.push_back(num(t[s]));
      csv.row(row);
    }
    m.files.push_back(write_file(out_dir, "total_load.csv", csv.str()));
  }

  m.wall_seconds = seconds_since(start);
  write_manifest(out_dir, m);
  return m;
}

}  // namespace evcharge
