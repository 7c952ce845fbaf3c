#include "nuwalk/run.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nuwalk/oscillation.hpp"
#include "nuwalk/pmns.hpp"
#include "nuwalk/validate.hpp"
#include "nuwalk/walk.hpp"
#include "nuwalk/wavepacket.hpp"

namespace nuwalk {

namespace {

struct Series {
  std::string name;
  std::vector<double> values;
};

struct Report {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> derived;
  std::vector<std::string> warnings;
  std::vector<long> steps;  // empty for step-free modes
  std::vector<Series> series;
  std::vector<SuiteResult> suites;  // validate mode only
};

std::vector<long> output_steps(const RunConfig& cfg) {
  std::vector<long> out;
  for (long n = 0; n <= cfg.steps; n += cfg.stride) out.push_back(n);
  return out;
}

void write_csv(std::ostream& os, const RunConfig& cfg, const Report& r) {
  os << "# nuwalk " << cfg.mode << "\n";
  for (const auto& kv : r.config) os << "# " << kv.first << " = " << kv.second << "\n";
  for (const auto& kv : r.derived)
    os << "# derived " << kv.first << " = " << kv.second << "\n";
  for (const auto& w : r.warnings) os << "# warning: " << w << "\n";
  if (!r.suites.empty()) {
    os << "suite,measured,tolerance,status\n";
    for (const auto& s : r.suites)
      os << s.name << "," << format_double(s.measured) << ","
         << format_double(s.tolerance) << "," << (s.pass ? "pass" : "FAIL") << "\n";
    return;
  }
  const bool stepped = !r.steps.empty();
  if (stepped) os << "step";
  for (size_t c = 0; c < r.series.size(); ++c)
    os << (stepped || c ? "," : "") << r.series[c].name;
  os << "\n";
  const size_t rows = stepped ? r.steps.size() : 1;
  for (size_t i = 0; i < rows; ++i) {
    if (stepped) os << r.steps[i];
    for (size_t c = 0; c < r.series.size(); ++c)
      os << (stepped || c ? "," : "") << format_double(r.series[c].values[i]);
    os << "\n";
  }
}

void write_json(std::ostream& os, const RunConfig& cfg, const Report& r) {
  nlohmann::ordered_json j;
  j["mode"] = cfg.mode;
  auto& conf = j["config"];
  for (const auto& kv : r.config) conf[kv.first] = kv.second;
  if (!r.derived.empty()) {
    auto& der = j["derived"];
    for (const auto& kv : r.derived) der[kv.first] = kv.second;
  }
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  if (!r.suites.empty()) {
    auto& suites = j["suites"];
    for (const auto& s : r.suites)
      suites.push_back({{"name", s.name},
                        {"measured", s.measured},
                        {"tolerance", s.tolerance},
                        {"status", s.pass ? "pass" : "FAIL"}});
  } else {
    auto& series = j["series"];
    if (!r.steps.empty()) series.push_back({{"name", "step"}, {"values", r.steps}});
    for (const auto& s : r.series)
      series.push_back({{"name", s.name}, {"values", s.values}});
  }
  os << j.dump(2) << "\n";
}

void emit(const RunConfig& cfg, const Report& r, std::ostream& diagnostics) {
  for (const auto& w : r.warnings) diagnostics << "warning: " << w << "\n";
  std::ofstream file;
  if (cfg.out_path != "-") {
    file.open(cfg.out_path);
    if (!file)
      throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
  }
  std::ostream& os = cfg.out_path == "-" ? std::cout : file;
  if (cfg.format == "json")
    write_json(os, cfg, r);
  else
    write_csv(os, cfg, r);
  os.flush();
  if (!os) throw std::runtime_error("write to '" + cfg.out_path + "' failed");
}

void add_walk_derived(Report& r, const WalkParams<double>& p, bool with_scales) {
  r.derived.emplace_back("walk.theta1", format_double(p.theta[0]));
  r.derived.emplace_back("walk.theta2", format_double(p.theta[1]));
  r.derived.emplace_back("walk.theta3", format_double(p.theta[2]));
  r.derived.emplace_back("walk.ktilde", format_double(p.ktilde));
  if (with_scales) {
    r.derived.emplace_back("walk.dt_seconds", format_double(p.dt_seconds));
    r.derived.emplace_back("walk.a_meters", format_double(p.a_meters));
  }
}

Report run_oscillate(const RunConfig& cfg) {
  Report r;
  WalkParams<double> walk;
  if (cfg.group_set("physical.")) {
    walk = solve_walk_angles(cfg.phys, cfg.phys_dt_seconds, cfg.steps,
                             cfg.theta1_anchor, &r.warnings);
    add_walk_derived(r, walk, true);
  } else {
    walk.theta = cfg.theta;
    walk.ktilde = cfg.ktilde;
    walk.dt_seconds = cfg.walk_dt_seconds;
    walk.a_meters = cfg.walk_a_meters;
    auto w = dirac_regime_warnings(walk);
    r.warnings.insert(r.warnings.end(), w.begin(), w.end());
  }
  const PmnsMatrix<double> u = build_pmns(cfg.mixing);
  std::array<double, 3> phases{};
  for (int j = 0; j < 3; ++j) phases[j] = dispersion_phase(walk.theta[j], walk.ktilde);

  r.steps = output_steps(cfg);
  r.series = {{"P_e", {}}, {"P_mu", {}}, {"P_tau", {}}};
  for (long n : r.steps)
    for (int b = 0; b < 3; ++b)
      r.series[b].values.push_back(phase_interference_probability(
          cfg.osc_flavor, static_cast<Flavor>(b), u, phases, n));
  return r;
}

Report run_entropy(const RunConfig& cfg) {
  Report r;
  WalkParams<double> walk;
  walk.theta = cfg.theta;
  walk.ktilde = cfg.wp_ktilde0;
  auto warn = dirac_regime_warnings(walk);
  r.warnings.insert(r.warnings.end(), warn.begin(), warn.end());

  const PmnsMatrix<double> u = build_pmns(cfg.mixing);
  r.steps = output_steps(cfg);
  for (double eps : cfg.wp_epsilon_list) {
    const WavepacketSpec<double> spec{cfg.wp_ktilde0, eps, cfg.wp_xi, cfg.wp_spacing};
    const WavepacketEvolution<double> evo(spec, u, cfg.theta, cfg.source);
    char name[64];
    std::snprintf(name, sizeof name, "S_%s_eps%g", flavor_name(cfg.source), eps);
    Series s{name, {}};
    s.values.reserve(r.steps.size());
    for (long n : r.steps) s.values.push_back(spin_space_entropy(evo.coin_density(n)));
    r.series.push_back(std::move(s));
  }
  return r;
}

Report run_flavor_corr(const RunConfig& cfg) {
  Report r;
  WalkParams<double> walk;
  walk.theta = cfg.theta;
  walk.ktilde = cfg.wp_ktilde0;
  auto warn = dirac_regime_warnings(walk);
  r.warnings.insert(r.warnings.end(), warn.begin(), warn.end());

  const PmnsMatrix<double> u = build_pmns(cfg.mixing);
  const WavepacketSpec<double> spec{cfg.wp_ktilde0, cfg.wp_epsilon, cfg.wp_xi,
                                    cfg.wp_spacing};
  r.steps = output_steps(cfg);
  r.series.resize(6);
  for (int a = 0; a < 3; ++a) {
    const Flavor probe = static_cast<Flavor>(a);
    r.series[a].name = std::string("S_") + flavor_name(probe) + "_corr";
    r.series[a + 3].name = std::string("raw_trace_") + flavor_name(probe);
    const FlavorCorrelationEvolution<double> evo(spec, u, cfg.theta, cfg.source, probe);
    for (long n : r.steps) {
      const auto d = evo.density(n);
      r.series[a].values.push_back(flavor_correlation_entropy(d));
      r.series[a + 3].values.push_back(d.raw_trace);
    }
  }
  return r;
}

Report run_map_params(const RunConfig& cfg) {
  Report r;
  WalkParams<double> walk;
  if (cfg.is_set("physical.m1_ev"))
    walk = map_physical_to_walk(cfg.masses_ev, cfg.momentum_ev, cfg.phys_dt_seconds,
                                &r.warnings);
  else
    walk = solve_walk_angles(cfg.phys, cfg.phys_dt_seconds, cfg.steps,
                             cfg.theta1_anchor, &r.warnings);
  auto scalar = [&](const std::string& name, double v) {
    r.series.push_back({name, {v}});
  };
  scalar("theta1", walk.theta[0]);
  scalar("theta2", walk.theta[1]);
  scalar("theta3", walk.theta[2]);
  scalar("ktilde", walk.ktilde);
  scalar("dt_seconds", walk.dt_seconds);
  scalar("a_meters", walk.a_meters);
  for (int j = 0; j < 3; ++j)
    scalar("phi" + std::to_string(j + 1), dispersion_phase(walk.theta[j], walk.ktilde));
  try {
    scalar("freq_ratio", step_frequencies(walk).ratio);
  } catch (const std::exception& e) {
    r.warnings.push_back(e.what());
  }
  return r;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& diagnostics) {
  Report r;
  if (cfg.mode == "oscillate")
    r = run_oscillate(cfg);
  else if (cfg.mode == "entropy")
    r = run_entropy(cfg);
  else if (cfg.mode == "flavor-corr")
    r = run_flavor_corr(cfg);
  else if (cfg.mode == "map-params")
    r = run_map_params(cfg);
  else if (cfg.mode == "validate")
    r.suites = run_validation_suites();
  else
    throw std::logic_error("run: unhandled mode " + cfg.mode);

  r.config = echo_config(cfg);
  emit(cfg, r, diagnostics);

  int failures = 0;
  for (const auto& s : r.suites)
    if (!s.pass) {
      ++failures;
      diagnostics << "validation failure: " << s.name << " measured "
                  << format_double(s.measured) << " exceeds tolerance "
                  << format_double(s.tolerance) << "\n";
    }
  return failures == 0 ? 0 : 1;
}

}  // namespace nuwalk
