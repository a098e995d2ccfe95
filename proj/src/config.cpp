#include "hierpareto/config.hpp"

#include "hierpareto/errors.hpp"
#include "hierpareto/table_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hierpareto {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "demand.class",      "demand.s0",       "kernel.family",   "kernel.lambda",  "kernel.table",
      "kernel.tail",       "welfare.form",    "welfare.amplitude", "welfare.cutoff", "welfare.table",
      "model.x_star",      "model.consistency_tol", "solver.n_nodes", "solver.x_min", "solver.grading",
      "solver.tol",        "solver.max_iter"};
  return keys;
}

std::string env_name(const std::string& key, const std::string& prefix) {
  std::string out = prefix;
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.set(key, value);
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  Config cfg = from_string(buf.str(), path);
  // Relative table paths resolve against the config file's directory.
  const auto base = std::filesystem::path(path).parent_path();
  for (const char* k : {"kernel.table", "welfare.table"}) {
    auto it = cfg.entries_.find(k);
    if (it != cfg.entries_.end() && std::filesystem::path(it->second).is_relative())
      it->second = (base / it->second).string();
  }
  return cfg;
}

void Config::apply_environment(const std::string& prefix) {
  for (const auto& key : known_config_keys()) {
    if (const char* v = std::getenv(env_name(key, prefix).c_str())) entries_[key] = trim(v);
  }
}

void Config::set(const std::string& key, const std::string& value) {
  const auto& keys = known_config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown config key '" + key + "'");
  entries_[key] = value;
}

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing text");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not a number: '" + *v + "'");
  }
}

long Config::get_long(const std::string& key, long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const long n = std::stol(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing text");
    return n;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + *v + "'");
  }
}

ModelConfig model_config_from(const Config& cfg) {
  ModelConfig mc;

  const std::string dclass = cfg.get_string("demand.class", "linear");
  switch (demand_class_from_string(dclass)) {
    case DemandClass::linear: mc.demand = Demand::linear(); break;
    case DemandClass::slowly_varying: mc.demand = Demand::slowly_varying(); break;
    case DemandClass::sigmoidal: mc.demand = Demand::sigmoidal(cfg.get_double("demand.s0", 20.0)); break;
  }

  const std::string family = cfg.get_string("kernel.family", "exponential");
  if (family == "exponential") {
    const double rate = cfg.get_double("kernel.lambda", 3.0);
    if (!(rate > 0.0)) throw ConfigError("kernel.lambda must be positive");
    mc.kernel = Kernel::exponential(rate);
  } else if (family == "tabulated" || family == "user_tabulated") {
    const auto path = cfg.get("kernel.table");
    if (!path) throw ConfigError("tabulated kernel needs kernel.table");
    const std::string tail = cfg.get_string("kernel.tail", "zero");
    if (tail != "zero" && tail != "power") throw ConfigError("kernel.tail must be 'zero' or 'power'");
    std::vector<double> s, v;
    for (const auto& [a, b] : read_two_column(*path)) {
      s.push_back(a);
      v.push_back(b);
    }
    mc.kernel = Kernel::tabulated(s, v, tail == "zero" ? TailRule::zero : TailRule::power);
  } else {
    throw ConfigError("unknown kernel.family '" + family + "'");
  }

  const std::string form = cfg.get_string("welfare.form", "rational");
  const double amp = cfg.get_double("welfare.amplitude", 1.0 + mc.kernel.R0());
  if (form == "rational" || form == "rational_default") {
    mc.welfare = Welfare::rational(amp);
  } else if (form == "cutoff" || form == "zero_beyond_cutoff") {
    mc.welfare = Welfare::cutoff(amp, cfg.get_double("welfare.cutoff", 10.0));
  } else if (form == "tabulated" || form == "user_tabulated") {
    const auto path = cfg.get("welfare.table");
    if (!path) throw ConfigError("tabulated welfare needs welfare.table");
    std::vector<double> s, v;
    for (const auto& [a, b] : read_two_column(*path)) {
      s.push_back(a);
      v.push_back(b);
    }
    mc.welfare = Welfare::tabulated(s, v);
  } else {
    throw ConfigError("unknown welfare.form '" + form + "'");
  }

  mc.x_star = cfg.get_double("model.x_star", 0.5);
  return mc;
}

SolverSettings solver_settings_from(const Config& cfg) {
  SolverSettings s;
  const long n = cfg.get_long("solver.n_nodes", static_cast<long>(s.n_nodes));
  if (n < 2) throw ConfigError("solver.n_nodes must be at least 2");
  s.n_nodes = static_cast<std::size_t>(n);
  s.x_min = cfg.get_double("solver.x_min", s.x_min);
  s.grading = cfg.get_double("solver.grading", s.grading);
  s.tol = cfg.get_double("solver.tol", s.tol);
  const long it = cfg.get_long("solver.max_iter", s.max_iter);
  if (it < 1) throw ConfigError("solver.max_iter must be positive");
  s.max_iter = static_cast<int>(it);
  if (!(s.x_min > 0.0 && s.x_min < 1.0)) throw ConfigError("solver.x_min must lie in (0, 1)");
  if (!(s.grading >= 1.0)) throw ConfigError("solver.grading must be >= 1");
  if (!(s.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  return s;
}

}  // namespace hierpareto
