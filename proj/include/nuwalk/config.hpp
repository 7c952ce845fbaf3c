// Run configuration: a single flat text format (key = value, '#' comments)
// with strict unknown-key checking, degree variants for angle keys, and
// mode-dependent required-key validation. CLI flags are applied through the
// same apply_override path so they behave exactly like config lines.
#pragma once

#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nuwalk/oscillation.hpp"
#include "nuwalk/pmns.hpp"
#include "nuwalk/types.hpp"

namespace nuwalk {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string mode;  // oscillate | entropy | flavor-corr | validate | map-params

  // walk parameter group
  std::array<double, 3> theta{};
  double ktilde = 0;
  double walk_dt_seconds = 0;
  double walk_a_meters = 0;

  // physical parameter group
  PhysicalParams<double> phys{};
  std::array<double, 3> masses_ev{};
  double momentum_ev = 0;
  double phys_dt_seconds = 6.5821195654760747e-27;  // ktilde = 0.01 at 1 GeV
  double theta1_anchor = 1e-3;

  MixingParams<double> mixing{0.5836, 0.1485, 0.7954, 0.0, 0.0, 0.0};

  double wp_ktilde0 = 0.01;
  double wp_epsilon = 0.01;
  std::vector<double> wp_epsilon_list{0.02, 0.05, 0.15};
  double wp_xi = 100.0;
  double wp_spacing = 0.001;
  Flavor source = Flavor::e;      // wavepacket.source_flavor
  Flavor osc_flavor = Flavor::e;  // oscillate.flavor

  long steps = 450;
  long stride = 1;
  std::string encoding = "six-level";
  std::string out_path = "-";
  std::string format = "csv";

  std::set<std::string> set_keys;  // canonical keys explicitly provided

  bool is_set(const std::string& key) const { return set_keys.count(key) > 0; }
  bool group_set(const std::string& prefix) const;
};

// Parse the config text; defaults fill everything not given. Errors carry
// "line N:" prefixes and the offending key.
RunConfig parse_config(const std::string& text);

// Set one key on an existing config (used for CLI flag overrides).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Mode-dependent required keys, group exclusivity and range checks. Call
// after all overrides are applied.
void finalize_config(RunConfig& cfg);

// Resolved configuration as ordered key/value strings for output headers.
std::vector<std::pair<std::string, std::string>> echo_config(const RunConfig& cfg);

// 17 significant digits, round-trip safe.
std::string format_double(double v);

}  // namespace nuwalk
