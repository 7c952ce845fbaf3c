#include "nuwalk/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nuwalk/walk.hpp"

namespace nuwalk {

namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "mode", "steps", "stride", "encoding",
      "output.path", "output.format",
      "walk.theta1", "walk.theta2", "walk.theta3", "walk.ktilde",
      "walk.dt_seconds", "walk.a_meters",
      "physical.dm21_sq", "physical.dm31_sq", "physical.dm32_sq",
      "physical.energy_gev", "physical.baseline_km", "physical.dt_seconds",
      "physical.theta1_anchor",
      "physical.m1_ev", "physical.m2_ev", "physical.m3_ev", "physical.momentum_ev",
      "pmns.theta12", "pmns.theta13", "pmns.theta23",
      "pmns.delta", "pmns.alpha1", "pmns.alpha2",
      "wavepacket.ktilde0", "wavepacket.epsilon", "wavepacket.epsilon_list",
      "wavepacket.xi", "wavepacket.spacing", "wavepacket.source_flavor",
      "oscillate.flavor"};
  return keys;
}

// Keys holding radians; each also accepts a <key>_deg variant.
bool is_angle_key(const std::string& key) {
  static const std::set<std::string> angle = {
      "walk.theta1", "walk.theta2", "walk.theta3", "walk.ktilde",
      "pmns.theta12", "pmns.theta13", "pmns.theta23",
      "pmns.delta", "pmns.alpha1", "pmns.alpha2",
      "wavepacket.ktilde0", "wavepacket.epsilon", "wavepacket.spacing",
      "physical.theta1_anchor"};
  return angle.count(key) > 0;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse '" + v + "' as a number");
  }
  if (trim(v.substr(pos)).size() != 0)
    throw config_error("key '" + key + "': cannot parse '" + v + "' as a number");
  return d;
}

long parse_integer(const std::string& key, const std::string& v) {
  size_t pos = 0;
  long n = 0;
  try {
    n = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse '" + v + "' as an integer");
  }
  if (trim(v.substr(pos)).size() != 0)
    throw config_error("key '" + key + "': cannot parse '" + v + "' as an integer");
  return n;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) out.push_back(parse_real(key, trim(item)));
  if (out.empty()) throw config_error("key '" + key + "': empty list");
  return out;
}

Flavor parse_flavor_value(const std::string& key, const std::string& v) {
  try {
    return parse_flavor(trim(v));
  } catch (const std::exception& e) {
    throw config_error("key '" + key + "': " + e.what());
  }
}

const std::set<std::string>& valid_modes() {
  static const std::set<std::string> m = {"oscillate", "entropy", "flavor-corr",
                                          "validate", "map-params"};
  return m;
}

void require(const RunConfig& cfg, const std::vector<std::string>& keys,
             const std::string& why) {
  std::vector<std::string> missing;
  for (const auto& k : keys)
    if (!cfg.is_set(k)) missing.push_back(k);
  if (!missing.empty()) {
    std::string msg = "missing required key";
    if (missing.size() > 1) msg += "s";
    msg += " for " + why + ":";
    for (const auto& k : missing) msg += " " + k;
    throw config_error(msg);
  }
}

}  // namespace

bool RunConfig::group_set(const std::string& prefix) const {
  for (const auto& k : set_keys)
    if (k.rfind(prefix, 0) == 0) return true;
  return false;
}

void apply_override(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key.empty()) throw config_error("empty key");

  double angle_factor = 1.0;
  if (key.size() > 4 && key.compare(key.size() - 4, 4, "_deg") == 0) {
    const std::string base = key.substr(0, key.size() - 4);
    if (is_angle_key(base)) {
      key = base;
      angle_factor = M_PI / 180.0;
    }
  }
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw config_error("unknown key '" + raw_key + "'");

  auto real = [&] { return parse_real(raw_key, value) * angle_factor; };

  if (key == "mode") {
    if (valid_modes().count(value) == 0)
      throw config_error("key 'mode': unknown mode '" + value +
                         "' (valid: oscillate, entropy, flavor-corr, validate, map-params)");
    cfg.mode = value;
  } else if (key == "steps") {
    cfg.steps = parse_integer(raw_key, value);
  } else if (key == "stride") {
    cfg.stride = parse_integer(raw_key, value);
  } else if (key == "encoding") {
    try {
      encoding_table(value);
    } catch (const std::exception& e) {
      throw config_error(std::string("key 'encoding': ") + e.what());
    }
    cfg.encoding = value;
  } else if (key == "output.path") {
    cfg.out_path = value;
  } else if (key == "output.format") {
    if (value != "csv" && value != "json")
      throw config_error("key 'output.format': expected csv or json, got '" + value + "'");
    cfg.format = value;
  } else if (key == "walk.theta1") {
    cfg.theta[0] = real();
  } else if (key == "walk.theta2") {
    cfg.theta[1] = real();
  } else if (key == "walk.theta3") {
    cfg.theta[2] = real();
  } else if (key == "walk.ktilde") {
    cfg.ktilde = real();
  } else if (key == "walk.dt_seconds") {
    cfg.walk_dt_seconds = real();
  } else if (key == "walk.a_meters") {
    cfg.walk_a_meters = real();
  } else if (key == "physical.dm21_sq") {
    cfg.phys.dm21_sq = real();
  } else if (key == "physical.dm31_sq") {
    cfg.phys.dm31_sq = real();
  } else if (key == "physical.dm32_sq") {
    cfg.phys.dm32_sq = real();
  } else if (key == "physical.energy_gev") {
    cfg.phys.energy_gev = real();
  } else if (key == "physical.baseline_km") {
    cfg.phys.baseline_km = real();
  } else if (key == "physical.dt_seconds") {
    cfg.phys_dt_seconds = real();
  } else if (key == "physical.theta1_anchor") {
    cfg.theta1_anchor = real();
  } else if (key == "physical.m1_ev") {
    cfg.masses_ev[0] = real();
  } else if (key == "physical.m2_ev") {
    cfg.masses_ev[1] = real();
  } else if (key == "physical.m3_ev") {
    cfg.masses_ev[2] = real();
  } else if (key == "physical.momentum_ev") {
    cfg.momentum_ev = real();
  } else if (key == "pmns.theta12") {
    cfg.mixing.theta12 = real();
  } else if (key == "pmns.theta13") {
    cfg.mixing.theta13 = real();
  } else if (key == "pmns.theta23") {
    cfg.mixing.theta23 = real();
  } else if (key == "pmns.delta") {
    cfg.mixing.delta = real();
  } else if (key == "pmns.alpha1") {
    cfg.mixing.alpha1 = real();
  } else if (key == "pmns.alpha2") {
    cfg.mixing.alpha2 = real();
  } else if (key == "wavepacket.ktilde0") {
    cfg.wp_ktilde0 = real();
  } else if (key == "wavepacket.epsilon") {
    cfg.wp_epsilon = real();
  } else if (key == "wavepacket.epsilon_list") {
    cfg.wp_epsilon_list = parse_real_list(raw_key, value);
  } else if (key == "wavepacket.xi") {
    cfg.wp_xi = real();
  } else if (key == "wavepacket.spacing") {
    cfg.wp_spacing = real();
  } else if (key == "wavepacket.source_flavor") {
    cfg.source = parse_flavor_value(raw_key, value);
  } else if (key == "oscillate.flavor") {
    cfg.osc_flavor = parse_flavor_value(raw_key, value);
  }
  cfg.set_keys.insert(key);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::set<std::string> seen;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "line " << line_no << ": expected 'key = value', got '" << line << "'";
      throw config_error(os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_override(cfg, key, value);
      std::string canon = key;
      if (canon.size() > 4 && canon.compare(canon.size() - 4, 4, "_deg") == 0 &&
          is_angle_key(canon.substr(0, canon.size() - 4)))
        canon = canon.substr(0, canon.size() - 4);
      if (!seen.insert(canon).second) {
        std::ostringstream os;
        os << "line " << line_no << ": duplicate key '" << canon << "'";
        throw config_error(os.str());
      }
    } catch (const config_error& e) {
      const std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      std::ostringstream os;
      os << "line " << line_no << ": " << what;
      throw config_error(os.str());
    }
  }
  return cfg;
}

void finalize_config(RunConfig& cfg) {
  if (cfg.mode.empty())
    throw config_error(
        "missing required key: mode (oscillate | entropy | flavor-corr | validate | "
        "map-params); oscillate needs walk.theta1..3 + walk.ktilde or physical.dm21_sq + "
        "physical.dm31_sq + physical.energy_gev + physical.baseline_km; entropy and "
        "flavor-corr need walk.theta1..3; map-params needs the physical group");
  if (valid_modes().count(cfg.mode) == 0)
    throw config_error("unknown mode '" + cfg.mode +
                       "' (valid: oscillate, entropy, flavor-corr, validate, map-params)");
  if (cfg.steps < 0) throw config_error("steps must be >= 0");
  if (cfg.stride < 1) throw config_error("stride must be >= 1");

  const bool walk_group = cfg.group_set("walk.");
  const bool phys_group = cfg.group_set("physical.");
  if (walk_group && phys_group)
    throw config_error("walk.* and physical.* parameter groups are mutually exclusive");

  const bool masses_route = cfg.is_set("physical.m1_ev") || cfg.is_set("physical.m2_ev") ||
                            cfg.is_set("physical.m3_ev");
  const bool splittings_route =
      cfg.is_set("physical.dm21_sq") || cfg.is_set("physical.dm31_sq") ||
      cfg.is_set("physical.dm32_sq");
  if (masses_route && splittings_route)
    throw config_error("physical.m*_ev and physical.dm*_sq are mutually exclusive");

  auto complete_splittings = [&] {
    require(cfg, {"physical.dm21_sq", "physical.dm31_sq", "physical.energy_gev",
                  "physical.baseline_km"},
            "mode " + cfg.mode + " with physical parameters");
    if (!cfg.is_set("physical.dm32_sq"))
      cfg.phys.dm32_sq = cfg.phys.dm31_sq - cfg.phys.dm21_sq;
    try {
      validate_physical(cfg.phys);
    } catch (const std::exception& e) {
      throw config_error(e.what());
    }
  };

  if (cfg.mode == "oscillate") {
    if (phys_group) {
      complete_splittings();
      if (cfg.steps < 1)
        throw config_error("mode oscillate with physical parameters needs steps >= 1");
    } else {
      require(cfg, {"walk.theta1", "walk.theta2", "walk.theta3", "walk.ktilde"},
              "mode oscillate");
    }
  } else if (cfg.mode == "entropy" || cfg.mode == "flavor-corr") {
    if (phys_group)
      throw config_error("mode " + cfg.mode +
                         " takes walk.theta1..3 directly, not physical.* parameters");
    require(cfg, {"walk.theta1", "walk.theta2", "walk.theta3"}, "mode " + cfg.mode);
  } else if (cfg.mode == "map-params") {
    if (walk_group)
      throw config_error("mode map-params takes physical.* parameters, not walk.*");
    if (masses_route) {
      require(cfg, {"physical.m1_ev", "physical.m2_ev", "physical.m3_ev"},
              "mode map-params with masses");
      if (!cfg.is_set("physical.momentum_ev")) {
        require(cfg, {"physical.energy_gev"},
                "mode map-params with masses (momentum_ev or energy_gev)");
        cfg.momentum_ev = cfg.phys.energy_gev * 1e9;
      }
    } else {
      complete_splittings();
      if (cfg.steps < 1) throw config_error("mode map-params needs steps >= 1");
    }
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> echo_config(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](const std::string& k, const std::string& v) { out.emplace_back(k, v); };
  auto addd = [&](const std::string& k, double v) { add(k, format_double(v)); };

  add("mode", cfg.mode);
  add("steps", std::to_string(cfg.steps));
  add("stride", std::to_string(cfg.stride));
  add("encoding", cfg.encoding);
  add("output.format", cfg.format);
  add("output.path", cfg.out_path);
  addd("pmns.theta12", cfg.mixing.theta12);
  addd("pmns.theta13", cfg.mixing.theta13);
  addd("pmns.theta23", cfg.mixing.theta23);
  addd("pmns.delta", cfg.mixing.delta);
  addd("pmns.alpha1", cfg.mixing.alpha1);
  addd("pmns.alpha2", cfg.mixing.alpha2);

  const bool walk_group = cfg.group_set("walk.");
  const bool phys_group = cfg.group_set("physical.");
  if (walk_group) {
    addd("walk.theta1", cfg.theta[0]);
    addd("walk.theta2", cfg.theta[1]);
    addd("walk.theta3", cfg.theta[2]);
    if (cfg.is_set("walk.ktilde")) addd("walk.ktilde", cfg.ktilde);
    if (cfg.is_set("walk.dt_seconds")) addd("walk.dt_seconds", cfg.walk_dt_seconds);
    if (cfg.is_set("walk.a_meters")) addd("walk.a_meters", cfg.walk_a_meters);
  }
  if (phys_group) {
    const bool masses_route = cfg.is_set("physical.m1_ev");
    if (masses_route) {
      addd("physical.m1_ev", cfg.masses_ev[0]);
      addd("physical.m2_ev", cfg.masses_ev[1]);
      addd("physical.m3_ev", cfg.masses_ev[2]);
      addd("physical.momentum_ev", cfg.momentum_ev);
    } else {
      addd("physical.dm21_sq", cfg.phys.dm21_sq);
      addd("physical.dm31_sq", cfg.phys.dm31_sq);
      addd("physical.dm32_sq", cfg.phys.dm32_sq);
      addd("physical.energy_gev", cfg.phys.energy_gev);
      addd("physical.baseline_km", cfg.phys.baseline_km);
      addd("physical.theta1_anchor", cfg.theta1_anchor);
    }
    addd("physical.dt_seconds", cfg.phys_dt_seconds);
  }
  if (cfg.mode == "entropy" || cfg.mode == "flavor-corr") {
    addd("wavepacket.ktilde0", cfg.wp_ktilde0);
    addd("wavepacket.xi", cfg.wp_xi);
    addd("wavepacket.spacing", cfg.wp_spacing);
    add("wavepacket.source_flavor", flavor_name(cfg.source));
    if (cfg.mode == "entropy") {
      std::string lst;
      for (size_t i = 0; i < cfg.wp_epsilon_list.size(); ++i) {
        if (i) lst += ",";
        lst += format_double(cfg.wp_epsilon_list[i]);
      }
      add("wavepacket.epsilon_list", lst);
    } else {
      addd("wavepacket.epsilon", cfg.wp_epsilon);
    }
  }
  if (cfg.mode == "oscillate") add("oscillate.flavor", flavor_name(cfg.osc_flavor));
  return out;
}

}  // namespace nuwalk
