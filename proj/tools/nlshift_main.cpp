// Command-line front end: scenario parsing plus the speed / simulate / wave /
// sweep / selftest subcommands.  Exit codes: 0 pass, 1 acceptance failure,
// 2 configuration error, 3 numerical instability.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "nlshift/errors.hpp"
#include "nlshift/scenario.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_override(CommonFlags& cf, const std::string& key, const std::string& value) {
  cf.overrides.emplace_back(key, value);
}

void add_common(CLI::App* cmd, CommonFlags& cf) {
  cmd->add_option("--config", cf.config, "scenario config file (key = value lines)");
  cmd->add_option_function<std::string>(
      "--set", [&cf](const std::string& kvs) {
        const auto eq = kvs.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--set expects key=value");
        add_override(cf, kvs.substr(0, eq), kvs.substr(eq + 1));
      },
      "override any config key, e.g. --set resource.r_plus=1.5")->take_all();
  cmd->add_option_function<std::string>(
      "--out", [&cf](const std::string& v) { add_override(cf, "out.dir", v); },
      "output directory");
  cmd->add_option_function<double>(
      "--d", [&cf](double v) { add_override(cf, "sim.d", nlshift::format_double(v)); },
      "dispersal rate");
  cmd->add_option_function<std::string>(
      "--kernel", [&cf](const std::string& v) { add_override(cf, "kernel.family", v); },
      "kernel family: uniform | triangular | cosine-bump");
  cmd->add_option_function<double>(
      "--half-width",
      [&cf](double v) { add_override(cf, "kernel.half_width", nlshift::format_double(v)); },
      "kernel half-width L");
  cmd->add_option_function<std::string>(
      "--resource", [&cf](const std::string& v) { add_override(cf, "resource.family", v); },
      "resource family: tanh | piecewise-linear | smoothstep");
}

nlshift::Scenario build_scenario(const CommonFlags& cf, const std::string& mode) {
  nlshift::Scenario s;
  if (!cf.config.empty()) s = nlshift::load_scenario(cf.config);
  for (const auto& [k, v] : cf.overrides) s.set(k, v);
  s.set("mode", mode);
  return s;
}

int dispatch(const nlshift::Scenario& s) {
  const nlshift::Report rep = nlshift::run_scenario(s);
  nlshift::write_report(rep, s.out_dir, std::cout);
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal-dispersal population model in a shifting habitat"};
  app.set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  app.require_subcommand(1);

  CommonFlags speed_cf, sim_cf, wave_cf, sweep_cf;

  auto* speed = app.add_subcommand("speed", "compute the spreading speed c* and lambda*");
  add_common(speed, speed_cf);

  auto* sim = app.add_subcommand("simulate", "integrate the Cauchy problem");
  add_common(sim, sim_cf);
  sim->add_option_function<double>(
      "--c", [&](double v) { add_override(sim_cf, "sim.c", nlshift::format_double(v)); },
      "habitat shift speed");
  sim->add_option_function<double>(
      "--t-end", [&](double v) { add_override(sim_cf, "sim.t_end", nlshift::format_double(v)); },
      "time horizon");
  sim->add_option_function<double>(
      "--dt", [&](double v) { add_override(sim_cf, "sim.dt", nlshift::format_double(v)); },
      "time step");
  sim->add_option_function<double>(
      "--x-min", [&](double v) { add_override(sim_cf, "grid.x_min", nlshift::format_double(v)); },
      "left edge of the grid");
  sim->add_option_function<double>(
      "--x-max", [&](double v) { add_override(sim_cf, "grid.x_max", nlshift::format_double(v)); },
      "right edge of the grid");
  sim->add_option_function<double>(
      "--h", [&](double v) { add_override(sim_cf, "grid.h", nlshift::format_double(v)); },
      "grid spacing");
  sim->add_option_function<std::string>(
      "--u0", [&](const std::string& v) { add_override(sim_cf, "u0.kind", v); },
      "initial data: bump | step | file");

  auto* wave = app.add_subcommand("wave", "compute the forced traveling wave");
  add_common(wave, wave_cf);
  wave->add_option_function<double>(
      "--c", [&](double v) { add_override(wave_cf, "wave.c", nlshift::format_double(v)); },
      "wave speed (habitat shift speed)");
  wave->add_option_function<double>(
      "--tol", [&](double v) { add_override(wave_cf, "wave.tol", nlshift::format_double(v)); },
      "fixed-point tolerance");
  wave->add_option_function<int>(
      "--max-iter", [&](int v) { add_override(wave_cf, "wave.max_iter", std::to_string(v)); },
      "iteration budget");

  auto* sweep = app.add_subcommand("sweep", "run one scenario across an axis of values");
  add_common(sweep, sweep_cf);
  sweep->add_option_function<std::string>(
      "--axis", [&](const std::string& v) { add_override(sweep_cf, "sweep.axis", v); },
      "config key to sweep");
  sweep->add_option_function<std::string>(
      "--values", [&](const std::string& v) { add_override(sweep_cf, "sweep.values", v); },
      "comma-separated values");
  sweep->add_option_function<std::string>(
      "--mode", [&](const std::string& v) { add_override(sweep_cf, "sweep.mode", v); },
      "mode of each run (default simulate)");

  std::uint64_t selftest_seed = 1;
  auto* st = app.add_subcommand("selftest", "run the randomized property suites");
  st->add_option("--seed", selftest_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (speed->parsed()) return dispatch(build_scenario(speed_cf, "speed"));
    if (sim->parsed()) return dispatch(build_scenario(sim_cf, "simulate"));
    if (wave->parsed()) return dispatch(build_scenario(wave_cf, "wave"));
    if (sweep->parsed()) return dispatch(build_scenario(sweep_cf, "sweep"));
    if (st->parsed()) {
      const int failures = nlshift::selftest(selftest_seed, std::cout);
      return failures == 0 ? 0 : 1;
    }
  } catch (const nlshift::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nlshift::numeric_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
