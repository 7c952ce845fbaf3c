#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nuwalk/config.hpp"
#include "nuwalk/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"six-level discrete-time quantum walk simulator of neutrino oscillation"};
  std::string mode, config_path, out_path, format, steps, stride;
  std::vector<std::string> sets;
  app.add_option("mode", mode,
                 "oscillate | entropy | flavor-corr | validate | map-params");
  app.add_option("-c,--config", config_path, "configuration file (key = value lines)");
  app.add_option("-o,--out", out_path, "output path, - for stdout (default -)");
  app.add_option("-f,--format", format, "csv | json (default csv)");
  app.add_option("--steps", steps, "maximum step count");
  app.add_option("--stride", stride, "output row decimation");
  app.add_option("--set", sets, "override any config key, as key=value");
  CLI11_PARSE(app, argc, argv);

  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw nuwalk::config_error("cannot open config file '" + config_path + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    nuwalk::RunConfig cfg = nuwalk::parse_config(text);
    for (const auto& kv : sets) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw nuwalk::config_error("--set expects key=value, got '" + kv + "'");
      nuwalk::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!steps.empty()) nuwalk::apply_override(cfg, "steps", steps);
    if (!stride.empty()) nuwalk::apply_override(cfg, "stride", stride);
    if (!out_path.empty()) nuwalk::apply_override(cfg, "output.path", out_path);
    if (!format.empty()) nuwalk::apply_override(cfg, "output.format", format);
    if (!mode.empty()) nuwalk::apply_override(cfg, "mode", mode);
    nuwalk::finalize_config(cfg);
    return nuwalk::run(cfg, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
