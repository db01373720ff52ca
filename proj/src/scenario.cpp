#include "nslab/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nslab/errors.hpp"
#include "nslab/hugoniot.hpp"

extern char** environ;

namespace nslab {

const std::vector<KeyDoc>& config_keys() {
  static const std::vector<KeyDoc> keys = {
      {"name", "default", "scenario name (output subdirectory in sweeps)"},
      {"gamma", "required", "adiabatic exponent, > 1"},
      {"b", "1", "pressure scale, p = b v^-gamma"},
      {"mu", "1", "viscosity"},
      {"v_plus", "1", "right specific volume"},
      {"u_plus", "0", "right velocity"},
      {"delta_v", "0.1", "v_plus - v_minus (exclusive with delta)"},
      {"delta", "", "shock strength u_minus - u_plus; converted to delta_v"},
      {"x_min", "-400", "left edge of the frame window"},
      {"x_max", "400", "right edge of the frame window"},
      {"n_cells", "8192", "cells at refinement level 0"},
      {"cfl", "0.5", "CFL number in (0, 1]"},
      {"t_end", "200", "final time"},
      {"output_every", "20", "steps between diagnostics ticks"},
      {"snapshot_interval", "0", "time between snapshot files (0: first and last only)"},
      {"perturbation", "zero", "zero | gaussian-bump | compact-bump"},
      {"amplitude_v", "0", "bump amplitude added to v"},
      {"amplitude_u", "0", "bump amplitude added to u"},
      {"center", "0", "bump center in the frame"},
      {"width", "1", "bump width"},
      {"seed", "0", "seed for randomized probes"},
      {"refine", "0", "grid level; cells and steps scale by 2^refine"},
      {"profile_samples", "32769", "profile samples (rounded up to odd)"},
      {"profile_half_length", "0", "profile half window (0: automatic)"},
      {"profile_misfit_tol", "1e-9", "allowed |v(+-L) - v+-|"},
      {"profile_rel_tol", "1e-12", "profile integrator relative tolerance"},
      {"checks", "", "comma list of enabled checks (empty: all)"},
      {"output_dir", "out", "output directory"},
      {"sweep_delta", "", "comma list of shock strengths for sweep"},
  };
  return keys;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> c = {"profile",      "weight",       "identity",
                                             "contraction",  "decay",        "conservation",
                                             "ledger",       "positivity",   "poincare",
                                             "probes"};
  return c;
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : e_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& k) const { return e_.count(k) != 0; }

  [[noreturn]] void fail(const std::string& k, const std::string& what) const {
    auto it = e_.find(k);
    const int line = it == e_.end() ? 0 : it->second.line;
    std::string where = source_;
    if (line > 0) where += ":" + std::to_string(line);
    throw ConfigError(where + ": key '" + k + "': " + what, k, line);
  }

  double num(const std::string& k, double fallback) const {
    auto it = e_.find(k);
    if (it == e_.end()) return fallback;
    const std::string& v = it->second.value;
    double x = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) fail(k, "expected a number, got '" + v + "'");
    return x;
  }

  template <class Int>
  Int integer(const std::string& k, Int fallback) const {
    auto it = e_.find(k);
    if (it == e_.end()) return fallback;
    const std::string& v = it->second.value;
    Int x{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) fail(k, "expected an integer, got '" + v + "'");
    return x;
  }

  std::string str(const std::string& k, const std::string& fallback) const {
    auto it = e_.find(k);
    return it == e_.end() ? fallback : it->second.value;
  }

 private:
  std::map<std::string, Entry> e_;
  std::string source_;
};

bool is_known(const std::string& k) {
  const auto& keys = config_keys();
  return std::any_of(keys.begin(), keys.end(), [&](const KeyDoc& d) { return k == d.key; });
}

}  // namespace

Scenario parse_scenario(std::string_view text, const KeyValues& overrides,
                        const std::string& source) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'", {}, lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_known(key)) throw ConfigError(where + ": unknown key '" + key + "'", key, lineno);
    if (entries.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'", key, lineno);
    entries[key] = {value, lineno};
  }
  for (const auto& [key, value] : overrides) {
    if (!is_known(key)) {
      throw ConfigError("environment: unknown key '" + key + "'", key, 0);
    }
    entries[key] = {value, 0};
  }

  const Reader r(entries, source);
  Scenario s;
  SimConfig& c = s.config;
  if (!r.has("gamma")) r.fail("gamma", "required key is missing");
  s.name = r.str("name", s.name);
  if (s.name.empty()) r.fail("name", "must not be empty");
  c.model.gamma = r.num("gamma", c.model.gamma);
  c.model.b = r.num("b", c.model.b);
  c.model.mu = r.num("mu", c.model.mu);
  if (!(c.model.gamma > 1.0)) r.fail("gamma", "must exceed 1");
  if (!(c.model.b > 0.0)) r.fail("b", "must be positive");
  if (!(c.model.mu > 0.0)) r.fail("mu", "must be positive");
  c.v_plus = r.num("v_plus", c.v_plus);
  c.u_plus = r.num("u_plus", c.u_plus);
  if (!(c.v_plus > 0.0)) r.fail("v_plus", "must be positive");
  if (r.has("delta") && r.has("delta_v")) r.fail("delta", "give either delta or delta_v, not both");
  if (r.has("delta")) {
    const double d = r.num("delta", 0.0);
    if (!(d > 0.0)) r.fail("delta", "must be positive");
    try {
      c.delta_v = delta_v_for_strength(c.model, c.v_plus, d);
    } catch (const std::exception& e) {
      r.fail("delta", e.what());
    }
  } else {
    c.delta_v = r.num("delta_v", c.delta_v);
  }
  if (!(c.delta_v > 0.0 && c.delta_v < c.v_plus)) r.fail("delta_v", "must lie in (0, v_plus)");
  c.x_min = r.num("x_min", c.x_min);
  c.x_max = r.num("x_max", c.x_max);
  if (!(c.x_max > c.x_min)) r.fail("x_max", "must exceed x_min");
  c.n_cells = r.integer<std::size_t>("n_cells", c.n_cells);
  if (c.n_cells < 16) r.fail("n_cells", "must be at least 16");
  c.cfl = r.num("cfl", c.cfl);
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) r.fail("cfl", "must lie in (0, 1]");
  c.t_end = r.num("t_end", c.t_end);
  if (!(c.t_end > 0.0)) r.fail("t_end", "must be positive");
  c.output_every = r.integer<std::size_t>("output_every", c.output_every);
  if (c.output_every == 0) r.fail("output_every", "must be at least 1");
  c.snapshot_interval = r.num("snapshot_interval", c.snapshot_interval);
  if (!(c.snapshot_interval >= 0.0)) r.fail("snapshot_interval", "must be nonnegative");
  try {
    c.perturbation.shape = perturbation_shape_from_string(r.str("perturbation", "zero"));
  } catch (const UsageError& e) {
    r.fail("perturbation", e.what());
  }
  c.perturbation.amplitude_v = r.num("amplitude_v", c.perturbation.amplitude_v);
  c.perturbation.amplitude_u = r.num("amplitude_u", c.perturbation.amplitude_u);
  c.perturbation.center = r.num("center", c.perturbation.center);
  c.perturbation.width = r.num("width", c.perturbation.width);
  if (!(c.perturbation.width > 0.0)) r.fail("width", "must be positive");
  c.seed = r.integer<std::uint64_t>("seed", c.seed);
  c.refine = r.integer<int>("refine", c.refine);
  if (c.refine < 0 || c.refine > 8) r.fail("refine", "must lie in [0, 8]");
  c.profile.n_samples = r.integer<std::size_t>("profile_samples", c.profile.n_samples);
  if (c.profile.n_samples < 64) r.fail("profile_samples", "must be at least 64");
  c.profile.half_length = r.num("profile_half_length", c.profile.half_length);
  if (!(c.profile.half_length >= 0.0)) r.fail("profile_half_length", "must be nonnegative");
  c.profile.misfit_tol = r.num("profile_misfit_tol", c.profile.misfit_tol);
  if (!(c.profile.misfit_tol > 0.0)) r.fail("profile_misfit_tol", "must be positive");
  c.profile.rel_tol = r.num("profile_rel_tol", c.profile.rel_tol);
  if (!(c.profile.rel_tol > 0.0)) r.fail("profile_rel_tol", "must be positive");

  s.checks = split_list(r.str("checks", ""));
  for (const auto& ck : s.checks) {
    const auto& kc = known_checks();
    if (std::find(kc.begin(), kc.end(), ck) == kc.end()) r.fail("checks", "unknown check '" + ck + "'");
  }
  s.output_dir = r.str("output_dir", "out");
  if (s.output_dir.empty()) r.fail("output_dir", "must not be empty");
  for (const auto& item : split_list(r.str("sweep_delta", ""))) {
    double d = 0.0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), d);
    if (ec != std::errc() || p != item.data() + item.size() || !(d > 0.0)) {
      r.fail("sweep_delta", "expected positive numbers, got '" + item + "'");
    }
    s.sweep_delta.push_back(d);
  }
  return s;
}

Scenario parse_config(const std::filesystem::path& path, bool use_env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), use_env ? env_overrides() : KeyValues{}, path.string());
}

KeyValues env_overrides() {
  KeyValues out;
  const std::string prefix = kEnvPrefix;
  for (char** e = environ; e && *e; ++e) {
    const std::string kv = *e;
    if (kv.rfind(prefix, 0) != 0) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    std::string key = kv.substr(prefix.size(), eq - prefix.size());
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    out.emplace_back(key, kv.substr(eq + 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

KeyValues config_entries(const SimConfig& c) {
  return {
      {"gamma", fmt(c.model.gamma)},
      {"b", fmt(c.model.b)},
      {"mu", fmt(c.model.mu)},
      {"v_plus", fmt(c.v_plus)},
      {"u_plus", fmt(c.u_plus)},
      {"delta_v", fmt(c.delta_v)},
      {"x_min", fmt(c.x_min)},
      {"x_max", fmt(c.x_max)},
      {"n_cells", std::to_string(c.n_cells)},
      {"cfl", fmt(c.cfl)},
      {"t_end", fmt(c.t_end)},
      {"output_every", std::to_string(c.output_every)},
      {"snapshot_interval", fmt(c.snapshot_interval)},
      {"perturbation", to_string(c.perturbation.shape)},
      {"amplitude_v", fmt(c.perturbation.amplitude_v)},
      {"amplitude_u", fmt(c.perturbation.amplitude_u)},
      {"center", fmt(c.perturbation.center)},
      {"width", fmt(c.perturbation.width)},
      {"seed", std::to_string(c.seed)},
      {"refine", std::to_string(c.refine)},
      {"profile_samples", std::to_string(c.profile.n_samples)},
      {"profile_half_length", fmt(c.profile.half_length)},
      {"profile_misfit_tol", fmt(c.profile.misfit_tol)},
      {"profile_rel_tol", fmt(c.profile.rel_tol)},
  };
}

KeyValues scenario_entries(const Scenario& s) {
  KeyValues out = {{"name", s.name}};
  for (auto& kv : config_entries(s.config)) out.push_back(std::move(kv));
  std::string checks;
  for (const auto& c : s.checks) checks += (checks.empty() ? "" : ",") + c;
  out.emplace_back("checks", checks);
  out.emplace_back("output_dir", s.output_dir.string());
  std::string sweep;
  for (double d : s.sweep_delta) sweep += (sweep.empty() ? "" : ",") + fmt(d);
  out.emplace_back("sweep_delta", sweep);
  return out;
}

std::string emit_scenario(const Scenario& s) {
  std::string out;
  for (const auto& [k, v] : scenario_entries(s)) out += k + " = " + v + "\n";
  return out;
}

std::vector<Scenario> expand_sweep(const Scenario& s) {
  if (s.sweep_delta.empty()) throw UsageError("sweep: scenario has no sweep_delta values");
  std::vector<Scenario> out;
  for (std::size_t k = 0; k < s.sweep_delta.size(); ++k) {
    Scenario m = s;
    m.sweep_delta.clear();
    m.name = s.name + "_d" + std::to_string(k);
    m.config.delta_v = delta_v_for_strength(s.config.model, s.config.v_plus, s.sweep_delta[k]);
    m.output_dir = s.output_dir / m.name;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace nslab
