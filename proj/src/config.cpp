#include "mhdbl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mhdbl {

StudyConfig::StudyConfig() : eps_list{1e-2, std::pow(10.0, -2.5), 1e-3, std::pow(10.0, -3.5)} {}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw) {
  std::string s = trim(raw);
  if (s.rfind("10^", 0) == 0) return std::pow(10.0, parse_double(s.substr(3)));
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& raw) {
  std::string s = trim(raw);
  int v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& raw) {
  std::string s = trim(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::vector<double> parse_list(const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

using Setter = std::function<void(StudyConfig&, const std::string&)>;
using Getter = std::function<std::string(const StudyConfig&)>;

struct Key {
  Setter set;
  Getter get;
};

template <class T>
Key num(T StudyConfig::*m) {
  if constexpr (std::is_same_v<T, int>)
    return {[m](StudyConfig& c, const std::string& v) { c.*m = parse_int(v); },
            [m](const StudyConfig& c) { return std::to_string(c.*m); }};
  else
    return {[m](StudyConfig& c, const std::string& v) { c.*m = parse_double(v); },
            [m](const StudyConfig& c) { return fmt_double(c.*m); }};
}

Key flag(bool StudyConfig::*m) {
  return {[m](StudyConfig& c, const std::string& v) { c.*m = parse_bool(v); },
          [m](const StudyConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

Key preset_param(double PresetParams::*m) {
  return {[m](StudyConfig& c, const std::string& v) { c.preset_params.*m = parse_double(v); },
          [m](const StudyConfig& c) { return fmt_double(c.preset_params.*m); }};
}

// Ordered: to_config_text writes in this order.
const std::vector<std::pair<std::string, Key>>& keys() {
  static const std::vector<std::pair<std::string, Key>> k = {
      {"preset",
       {[](StudyConfig& c, const std::string& v) { c.preset = parse_preset(trim(v)); },
        [](const StudyConfig& c) { return preset_name(c.preset); }}},
      {"eps_list",
       {[](StudyConfig& c, const std::string& v) { c.eps_list = parse_list(v); },
        [](const StudyConfig& c) {
          std::string s;
          for (std::size_t n = 0; n < c.eps_list.size(); ++n) s += (n ? ", " : "") + fmt_double(c.eps_list[n]);
          return s;
        }}},
      {"mu", num(&StudyConfig::mu)},
      {"kappa", num(&StudyConfig::kappa)},
      {"delta0", num(&StudyConfig::delta0)},
      {"delta", num(&StudyConfig::delta)},
      {"t_final", num(&StudyConfig::t_final)},
      {"nx", num(&StudyConfig::nx)},
      {"inner_ny", num(&StudyConfig::inner_ny)},
      {"bl_neta", num(&StudyConfig::bl_neta)},
      {"assembly_ny", num(&StudyConfig::assembly_ny)},
      {"ly", num(&StudyConfig::ly)},
      {"bl_leta", num(&StudyConfig::bl_leta)},
      {"points_per_layer", num(&StudyConfig::points_per_layer)},
      {"dt", num(&StudyConfig::dt)},
      {"dt_snap", num(&StudyConfig::dt_snap)},
      {"order", num(&StudyConfig::order)},
      {"out_dir",
       {[](StudyConfig& c, const std::string& v) { c.out_dir = trim(v); },
        [](const StudyConfig& c) { return c.out_dir; }}},
      {"dump_fields", flag(&StudyConfig::dump_fields)},
      {"remainder_orders", num(&StudyConfig::remainder_orders)},
      {"diagnostics", flag(&StudyConfig::diagnostics)},
      {"h_uniform", preset_param(&PresetParams::h_uniform)},
      {"shear_u_wall", preset_param(&PresetParams::shear_u_wall)},
      {"shear_u_amp", preset_param(&PresetParams::shear_u_amp)},
      {"shear_h_wall", preset_param(&PresetParams::shear_h_wall)},
      {"shear_h_amp", preset_param(&PresetParams::shear_h_amp)},
      {"amp_u", preset_param(&PresetParams::amp_u)},
      {"amp_h", preset_param(&PresetParams::amp_h)},
  };
  return k;
}

}  // namespace

void validate(const StudyConfig& c) {
  auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (c.eps_list.empty()) fail("eps_list is empty");
  for (std::size_t n = 0; n < c.eps_list.size(); ++n) {
    double e = c.eps_list[n];
    if (!(e > 0.0 && e <= 1.0)) fail("eps_list values must lie in (0, 1], got " + fmt_double(e));
    if (n > 0 && !(e < c.eps_list[n - 1])) fail("eps_list must be strictly decreasing");
  }
  if (!(c.t_final > 0.0)) fail("t_final must be positive");
  if (!(c.mu > 0.0 && c.kappa > 0.0)) fail("mu and kappa must be positive");
  if (!(c.delta0 > 0.0)) fail("delta0 must be positive");
  if (!(c.delta > 0.0 && c.delta < std::min(c.mu, c.kappa))) fail("delta must lie in (0, min(mu, kappa))");
  if (c.nx < 8 || c.inner_ny < 8 || c.bl_neta < 8 || c.assembly_ny < 8) fail("grid sizes must be at least 8");
  if (!(c.ly > 0.0 && c.bl_leta > 0.0 && c.points_per_layer > 0.0)) fail("domain lengths must be positive");
  if (!(c.dt > 0.0 && c.dt_snap >= c.dt)) fail("need 0 < dt <= dt_snap");
  if (c.order != 2 && c.order != 4) fail("order must be 2 or 4");
  if (c.remainder_orders < 0 || c.remainder_orders > 3) fail("remainder_orders must lie in [0, 3]");
}

StudyConfig parse_config(std::istream& is) {
  std::map<std::string, const Key*> index;
  for (const auto& [name, key] : keys()) index[name] = &key;
  StudyConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto where = [&] { return "config line " + std::to_string(lineno) + ": "; };
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(where() + "expected 'key = value'");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    auto it = index.find(k);
    if (it == index.end()) throw std::invalid_argument(where() + "unknown key '" + k + "'");
    if (!seen.insert(k).second) throw std::invalid_argument(where() + "duplicate key '" + k + "'");
    try {
      it->second->set(c, v);
    } catch (const std::exception& e) {
      throw std::invalid_argument(where() + k + ": " + e.what());
    }
  }
  validate(c);
  return c;
}

StudyConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path.string());
  return parse_config(is);
}

std::string to_config_text(const StudyConfig& c) {
  std::string s;
  for (const auto& [name, key] : keys()) s += name + " = " + key.get(c) + "\n";
  return s;
}

}  // namespace mhdbl
