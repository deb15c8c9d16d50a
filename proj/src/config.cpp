#include "evcharge/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace evcharge {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "expected a number, got '" + text + "'");
}

long parse_integer(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "expected an integer, got '" + text + "'");
}

bool parse_bool(const std::string& text, int line) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ParseError(line, "expected true or false, got '" + text + "'");
}

Profile parse_list(const std::string& text, int line) {
  Profile out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    std::istringstream words(token);
    std::string w;
    while (words >> w) out.push_back(parse_number(w, line));
  }
  if (out.empty()) throw ParseError(line, "empty number list");
  return out;
}

// "9-16" (1-based, inclusive).
std::pair<std::size_t, std::size_t> parse_range(const std::string& text,
                                                int line) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) {
    throw ParseError(line, "expected a slot range like 9-16");
  }
  const long a = parse_integer(trim(text.substr(0, dash)), line);
  const long b = parse_integer(trim(text.substr(dash + 1)), line);
  if (a < 1 || b < a) throw ParseError(line, "bad slot range '" + text + "'");
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

struct Setting {
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Setting> values;
  std::vector<Setting> days;  // repeated `day` keys of a trace base load

  const Setting* find(const std::string& key) const {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  }
};

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"scenario",
       {"T", "K", "J", "seed", "pricing", "inelastic_r", "eta_company",
        "coupled_steps", "predictor"}},
      {"base_load", {"kind", "a", "b", "rule", "p", "day"}},
      {"fleet",
       {"count", "class", "window", "rate_max", "low", "up", "budget", "eta",
        "eta_scale", "predictor", "relax", "relax_low", "relax_up",
        "relax_budget"}},
  };
  return keys;
}

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (!allowed_keys().count(name)) {
        throw ParseError(line, "unknown section [" + name + "]");
      }
      if (name != "fleet") {
        for (const auto& prev : sections) {
          if (prev.name == name) {
            throw ParseError(line, "duplicate section [" + name + "]");
          }
        }
      }
      sections.push_back(Section{name, line, {}, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (sections.empty()) throw ParseError(line, "key outside of any section");
    Section& sec = sections.back();
    const auto& keys = allowed_keys().at(sec.name);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParseError(line, "unknown key '" + key + "' in [" + sec.name + "]");
    }
    if (value.empty()) throw ParseError(line, "missing value for '" + key + "'");
    if (sec.name == "base_load" && key == "day") {
      sec.days.push_back({value, line});
      continue;
    }
    if (!sec.values.emplace(key, Setting{value, line}).second) {
      throw ParseError(line, "duplicate key '" + key + "'");
    }
  }
  return sections;
}

PredictorKind parse_predictor(const std::string& v, int line) {
  if (v == "zero") return PredictorKind::Zero;
  if (v == "past_average") return PredictorKind::PastGradientAverage;
  throw ParseError(line, "predictor must be zero, past_average or auto");
}

CustomerClass parse_class(const std::string& v, int line) {
  if (v == "price_sensitive") return CustomerClass::PriceSensitive;
  if (v == "inelastic") return CustomerClass::Inelastic;
  if (v == "controllable") return CustomerClass::Controllable;
  throw ParseError(line, "class must be price_sensitive, inelastic or controllable");
}

FeasibleSet fleet_set(const Section& sec, std::size_t slots) {
  FeasibleSet set;
  const Setting* window = sec.find("window");
  const Setting* low = sec.find("low");
  const Setting* up = sec.find("up");
  if (window && (low || up)) {
    throw ParseError(window->line, "use either window/rate_max or low/up");
  }
  if (window) {
    const auto [a, b] = parse_range(window->value, window->line);
    if (b > slots) throw ParseError(window->line, "window ends after slot T");
    const Setting* rate = sec.find("rate_max");
    if (!rate) throw ParseError(window->line, "window needs rate_max");
    set = FeasibleSet::window(slots, a, b, parse_number(rate->value, rate->line),
                              std::nullopt);
  } else {
    if (!low || !up) throw ParseError(sec.line, "fleet needs window or low/up");
    if (const Setting* rate = sec.find("rate_max")) {
      throw ParseError(rate->line, "rate_max only applies to window");
    }
    set.low = parse_list(low->value, low->line);
    set.up = parse_list(up->value, up->line);
  }
  if (const Setting* budget = sec.find("budget")) {
    if (budget->value != "none") {
      set.budget_active = true;
      set.budget = parse_number(budget->value, budget->line);
    }
  }
  return set;
}

std::optional<FeasibleSet> fleet_relaxation(const Section& sec,
                                            const FeasibleSet& set,
                                            std::size_t slots) {
  const Setting* relax = sec.find("relax");
  const Setting* rlow = sec.find("relax_low");
  const Setting* rup = sec.find("relax_up");
  const Setting* rbudget = sec.find("relax_budget");
  if (!relax && !rlow && !rup && !rbudget) return std::nullopt;
  if (relax && (rlow || rup || rbudget)) {
    throw ParseError(relax->line, "use either relax or relax_low/relax_up/relax_budget");
  }
  FeasibleSet out = set;
  if (relax) {
    const std::string& v = relax->value;
    if (v == "none") return std::nullopt;
    if (v == "drop_budget") {
      out.budget_active = false;
      out.budget = 0.0;
      return out;
    }
    if (v.rfind("window", 0) == 0) {
      const auto [a, b] = parse_range(trim(v.substr(6)), relax->line);
      if (b > slots) throw ParseError(relax->line, "window ends after slot T");
      double rate = 0.0;
      for (double u : set.up) rate = std::max(rate, u);
      if (const Setting* r = sec.find("rate_max")) {
        rate = parse_number(r->value, r->line);
      }
      const FeasibleSet widened = FeasibleSet::window(slots, a, b, rate, std::nullopt);
      out.low = widened.low;
      out.up = widened.up;
      return out;
    }
    throw ParseError(relax->line, "relax must be none, drop_budget or window A-B");
  }
  if (!rlow || !rup || !rbudget) {
    throw ParseError(sec.line, "relax_low, relax_up and relax_budget go together");
  }
  out.low = parse_list(rlow->value, rlow->line);
  out.up = parse_list(rup->value, rup->line);
  out.budget_active = rbudget->value != "none";
  out.budget = out.budget_active ? parse_number(rbudget->value, rbudget->line) : 0.0;
  return out;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  const std::vector<Section> sections = split_sections(text);
  const Section* scenario = nullptr;
  const Section* base = nullptr;
  std::vector<const Section*> fleets;
  for (const auto& s : sections) {
    if (s.name == "scenario") scenario = &s;
    if (s.name == "base_load") base = &s;
    if (s.name == "fleet") fleets.push_back(&s);
  }
  if (!scenario) throw ParseError(1, "missing [scenario] section");
  if (!base) throw ParseError(1, "missing [base_load] section");
  if (fleets.empty()) throw ParseError(1, "missing [fleet] section");

  ScenarioConfig cfg;
  auto get = [](const Section& s, const char* key) { return s.find(key); };
  if (auto v = get(*scenario, "T")) {
    const long t = parse_integer(v->value, v->line);
    if (t < 1) throw ValidationError("T", "must be positive");
    cfg.slots = static_cast<std::size_t>(t);
  }
  if (auto v = get(*scenario, "K")) cfg.days = static_cast<int>(parse_integer(v->value, v->line));
  if (auto v = get(*scenario, "J")) cfg.relax_days = static_cast<int>(parse_integer(v->value, v->line));
  if (auto v = get(*scenario, "seed")) {
    const long s = parse_integer(v->value, v->line);
    if (s < 0) throw ParseError(v->line, "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get(*scenario, "pricing")) {
    if (v->value == "aligned") {
      cfg.pricing.kind = PricingKind::Aligned;
    } else if (v->value == "natural") {
      cfg.pricing.kind = PricingKind::Natural;
    } else {
      throw ParseError(v->line, "pricing must be aligned or natural");
    }
  }
  if (auto v = get(*scenario, "inelastic_r")) cfg.pricing.r = parse_number(v->value, v->line);
  if (auto v = get(*scenario, "coupled_steps")) cfg.coupled_steps = parse_bool(v->value, v->line);
  if (cfg.days < 1) throw ValidationError("K", "must be at least 1");
  if (cfg.relax_days < 0 || cfg.relax_days > cfg.days) {
    throw ValidationError("J", "must lie in [0, K]");
  }

  // Base load.
  {
    const Setting* kind = base->find("kind");
    const std::string k = kind ? kind->value : "static";
    const int line = kind ? kind->line : base->line;
    auto list = [&](const char* key) {
      const Setting* s = base->find(key);
      if (!s) throw ParseError(base->line, std::string("base_load needs ") + key);
      return parse_list(s->value, s->line);
    };
    if (k == "static") {
      cfg.base_load.kind = BaseLoadModel::Kind::Static;
      cfg.base_load.a = list("a");
    } else if (k == "switching") {
      cfg.base_load.kind = BaseLoadModel::Kind::Switching;
      cfg.base_load.a = list("a");
      cfg.base_load.b = list("b");
      if (const Setting* r = base->find("rule")) {
        if (r->value == "alternate") {
          cfg.base_load.rule = BaseLoadModel::SwitchRule::Alternate;
        } else if (r->value == "random") {
          cfg.base_load.rule = BaseLoadModel::SwitchRule::SeededRandom;
        } else {
          throw ParseError(r->line, "rule must be alternate or random");
        }
      }
      if (const Setting* p = base->find("p")) cfg.base_load.p = parse_number(p->value, p->line);
    } else if (k == "trace") {
      cfg.base_load.kind = BaseLoadModel::Kind::Trace;
      for (const auto& d : base->days) cfg.base_load.trace.push_back(parse_list(d.value, d.line));
    } else {
      throw ParseError(line, "kind must be static, switching or trace");
    }
  }

  // Fleet.
  bool any_inelastic = false;
  for (const Section* f : fleets) {
    const Setting* cls = f->find("class");
    if (cls && parse_class(cls->value, cls->line) == CustomerClass::Inelastic) {
      any_inelastic = true;
    }
  }
  PredictorKind default_predictor = any_inelastic ? PredictorKind::Zero
                                                  : PredictorKind::PastGradientAverage;
  if (auto v = get(*scenario, "predictor")) {
    if (v->value != "auto") default_predictor = parse_predictor(v->value, v->line);
  }

  int next_id = 0;
  for (const Section* f : fleets) {
    CustomerSpec spec;
    if (const Setting* cls = f->find("class")) spec.cls = parse_class(cls->value, cls->line);
    spec.set = fleet_set(*f, cfg.slots);
    spec.relaxed_set = fleet_relaxation(*f, spec.set, cfg.slots);
    const Setting* eta = f->find("eta");
    const Setting* scale = f->find("eta_scale");
    if (eta && scale) throw ParseError(eta->line, "use either eta or eta_scale");
    if (eta) {
      spec.eta = parse_number(eta->value, eta->line);
    } else {
      const double c = scale ? parse_number(scale->value, scale->line) : 1.0;
      spec.eta = c / std::sqrt(static_cast<double>(cfg.days));
    }
    spec.predictor = default_predictor;
    if (const Setting* p = f->find("predictor")) {
      if (p->value != "auto") spec.predictor = parse_predictor(p->value, p->line);
    }
    if (spec.cls != CustomerClass::PriceSensitive) spec.predictor = PredictorKind::Zero;

    long count = 1;
    if (const Setting* c = f->find("count")) {
      count = parse_integer(c->value, c->line);
      if (count < 1) throw ParseError(c->line, "count must be positive");
    }
    for (long j = 0; j < count; ++j) {
      spec.id = next_id++;
      cfg.fleet.push_back(spec);
    }
  }

  if (auto v = get(*scenario, "eta_company"); v && v->value != "auto") {
    cfg.eta_company = parse_number(v->value, v->line);
  } else {
    cfg.eta_company = 0.5 * cfg.fleet.front().eta;
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string join(const Profile& v) {
  std::string out;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (t) out += ", ";
    out += exact(v[t]);
  }
  return out;
}

bool same_group(const CustomerSpec& a, const CustomerSpec& b) {
  return a.cls == b.cls && a.set == b.set && a.relaxed_set == b.relaxed_set &&
         a.eta == b.eta && a.predictor == b.predictor;
}

}  // namespace

std::string write_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[scenario]\n"
      << "T = " << cfg.slots << "\n"
      << "K = " << cfg.days << "\n"
      << "J = " << cfg.relax_days << "\n"
      << "seed = " << cfg.seed << "\n"
      << "pricing = "
      << (cfg.pricing.kind == PricingKind::Natural ? "natural" : "aligned") << "\n"
      << "inelastic_r = " << exact(cfg.pricing.r) << "\n"
      << "eta_company = " << exact(cfg.eta_company) << "\n"
      << "coupled_steps = " << (cfg.coupled_steps ? "true" : "false") << "\n\n";

  const BaseLoadModel& m = cfg.base_load;
  out << "[base_load]\n";
  switch (m.kind) {
    case BaseLoadModel::Kind::Static:
      out << "kind = static\na = " << join(m.a) << "\n";
      break;
    case BaseLoadModel::Kind::Switching:
      out << "kind = switching\na = " << join(m.a) << "\nb = " << join(m.b)
          << "\nrule = "
          << (m.rule == BaseLoadModel::SwitchRule::Alternate ? "alternate" : "random")
          << "\np = " << exact(m.p) << "\n";
      break;
    case BaseLoadModel::Kind::Trace:
      out << "kind = trace\n";
      for (const auto& d : m.trace) out << "day = " << join(d) << "\n";
      break;
  }

  for (std::size_t i = 0; i < cfg.fleet.size();) {
    std::size_t j = i + 1;
    while (j < cfg.fleet.size() && same_group(cfg.fleet[i], cfg.fleet[j])) ++j;
    const CustomerSpec& c = cfg.fleet[i];
    out << "\n[fleet]\n"
        << "count = " << (j - i) << "\n"
        << "class = " << to_string(c.cls) << "\n"
        << "low = " << join(c.set.low) << "\n"
        << "up = " << join(c.set.up) << "\n"
        << "budget = " << (c.set.budget_active ? exact(c.set.budget) : "none") << "\n"
        << "eta = " << exact(c.eta) << "\n"
        << "predictor = "
        << (c.predictor == PredictorKind::PastGradientAverage ? "past_average" : "zero")
        << "\n";
    if (c.relaxed_set) {
      out << "relax_low = " << join(c.relaxed_set->low) << "\n"
          << "relax_up = " << join(c.relaxed_set->up) << "\n"
          << "relax_budget = "
          << (c.relaxed_set->budget_active ? exact(c.relaxed_set->budget) : "none")
          << "\n";
    }
    i = j;
  }
  return out.str();
}

}  // namespace evcharge
