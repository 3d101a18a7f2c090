// Scenario orchestration: flat key=value configs, the four run modes, CSV
// artifacts and the plain-text report.

#include "nlshift/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "nlshift/dispersion.hpp"
#include "nlshift/errors.hpp"

namespace nlshift {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name", "mode", "seed", "out.dir",
      "kernel.family", "kernel.half_width",
      "resource.family", "resource.r_minus", "resource.r_plus", "resource.center",
      "resource.steepness",
      "sim.d", "sim.c", "sim.dt", "sim.t_end", "sim.rho", "sim.snapshot_stride",
      "grid.x_min", "grid.x_max", "grid.h",
      "u0.kind", "u0.amplitude", "u0.center", "u0.width", "u0.step_at", "u0.file",
      "front.theta", "front.window",
      "wave.c", "wave.tol", "wave.max_iter", "wave.xi_min", "wave.xi_max", "wave.h",
      "wave.epsilon",
      "ignition.t_end", "ignition.dt", "ignition.h", "ignition.x_min", "ignition.x_max",
      "sweep.axis", "sweep.values", "sweep.mode",
      "accept.extinction_sup", "accept.front_speed_rel_tol", "accept.wave_residual_max",
      "accept.wave_right_max", "accept.wave_left_rel_tol",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable line endings
  if (!out) throw config_error("cannot open output file " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Mode mode_from_string(std::string_view name) {
  if (name == "speed") return Mode::speed;
  if (name == "simulate") return Mode::simulate;
  if (name == "wave") return Mode::wave;
  if (name == "sweep") return Mode::sweep;
  if (name == "selftest") return Mode::selftest;
  throw config_error("unknown mode: " + std::string(name));
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::speed: return "speed";
    case Mode::simulate: return "simulate";
    case Mode::wave: return "wave";
    case Mode::sweep: return "sweep";
    case Mode::selftest: return "selftest";
  }
  return "?";
}

bool Scenario::has(const std::string& key) const { return kv.count(key) != 0; }

void Scenario::set(const std::string& key, const std::string& value) {
  if (!known_keys().count(key)) throw config_error("unknown config key: " + key);
  kv[key] = value;
  if (key == "name") name = value;
  if (key == "mode") mode = mode_from_string(value);
  if (key == "out.dir") out_dir = value;
  if (key == "seed") seed = static_cast<std::uint64_t>(parse_double(key, value));
}

double Scenario::get_double(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  return parse_double(key, it->second);
}

int Scenario::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, fallback);
  return static_cast<int>(std::lround(v));
}

std::string Scenario::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

KernelSpec Scenario::kernel() const {
  KernelSpec k;
  k.family = kernel_family_from_string(get_string("kernel.family", "uniform"));
  k.half_width = get_double("kernel.half_width", 1.0);
  if (k.half_width <= 0.0) throw config_error("kernel.half_width must be positive");
  return k;
}

ResourceProfile Scenario::resource() const {
  ResourceProfile r;
  r.family = resource_family_from_string(get_string("resource.family", "tanh"));
  r.r_minus = get_double("resource.r_minus", -1.0);
  r.r_plus = get_double("resource.r_plus", 1.0);
  r.center = get_double("resource.center", 0.0);
  r.steepness = get_double("resource.steepness", 1.0);
  r.validate();
  return r;
}

Grid1D Scenario::sim_grid() const {
  return Grid1D::make(get_double("grid.x_min", -100.0), get_double("grid.x_max", 300.0),
                      get_double("grid.h", 0.05));
}

SimConfig Scenario::sim_config() const {
  SimConfig cfg;
  cfg.d = get_double("sim.d", 1.0);
  cfg.kernel = kernel();
  cfg.resource = resource();
  if (!has("sim.c")) throw config_error("missing required key sim.c");
  cfg.c = get_double("sim.c", 0.0);
  if (!has("sim.t_end")) throw config_error("missing required key sim.t_end");
  cfg.t_end = get_double("sim.t_end", 0.0);
  cfg.dt = get_double("sim.dt", 0.0);
  cfg.rho = get_double("sim.rho", 0.0);
  cfg.snapshot_stride = get_int("sim.snapshot_stride", 16);
  return cfg;
}

Field Scenario::initial_data(const Grid1D& grid) const {
  const ResourceProfile r = resource();
  const std::string kind = get_string("u0.kind", "bump");
  Field u(grid, 0.0, 0.0, 0.0);
  const double amp = get_double("u0.amplitude", 0.5);
  if (amp < 0.0 || amp > r.r_plus)
    throw config_error("u0.amplitude must lie in [0, r_plus]");
  if (kind == "bump") {
    const double c0 = get_double("u0.center", 0.0);
    const double w = get_double("u0.width", 2.0);
    if (w <= 0.0) throw config_error("u0.width must be positive");
    for (int i = 0; i < grid.n; ++i) {
      const double s = std::abs(grid.x(i) - c0);
      u.values[static_cast<size_t>(i)] =
          s >= w + 6.0 ? 0.0 : amp * std::exp(-std::pow(std::max(s - w, 0.0), 2));
    }
  } else if (kind == "step") {
    const double at = get_double("u0.step_at", 0.0);
    for (int i = 0; i < grid.n; ++i)
      u.values[static_cast<size_t>(i)] = grid.x(i) < at ? amp : 0.0;
    u.ext_left = amp;
  } else if (kind == "file") {
    const std::string path = get_string("u0.file", "");
    if (path.empty()) throw config_error("u0.kind=file requires u0.file");
    std::ifstream in(path);
    if (!in) throw config_error("cannot open u0.file " + path);
    std::vector<double> xs, vs;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw config_error("u0.file: expected 'x,u' rows");
      xs.push_back(parse_double("u0.file x", trim(line.substr(0, comma))));
      vs.push_back(parse_double("u0.file u", trim(line.substr(comma + 1))));
    }
    if (xs.size() < 2) throw config_error("u0.file: need at least two samples");
    for (size_t i = 1; i < xs.size(); ++i)
      if (xs[i] <= xs[i - 1]) throw config_error("u0.file: x column must be increasing");
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.x(i);
      const auto hi = std::lower_bound(xs.begin(), xs.end(), x);
      double v;
      if (hi == xs.begin())
        v = vs.front();
      else if (hi == xs.end())
        v = vs.back();
      else {
        const size_t j = static_cast<size_t>(hi - xs.begin());
        const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        v = (1.0 - t) * vs[j - 1] + t * vs[j];
      }
      u.values[static_cast<size_t>(i)] = v;
    }
    u.ext_left = vs.front();
    u.ext_right = vs.back();
  } else {
    throw config_error("u0.kind must be bump, step or file");
  }
  return u;
}

IgnitionBudget Scenario::ignition_budget() const {
  IgnitionBudget b;
  b.t_end = get_double("ignition.t_end", b.t_end);
  b.dt = get_double("ignition.dt", b.dt);
  b.h = get_double("ignition.h", b.h);
  b.x_min = get_double("ignition.x_min", b.x_min);
  b.x_max = get_double("ignition.x_max", b.x_max);
  return b;
}

Scenario load_scenario(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw config_error("cannot open config file " + config_path.string());
  Scenario s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(config_path.string() + ":" + std::to_string(lineno) +
                         ": expected 'key = value'");
    s.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return s;
}

void validate_keys(const Scenario& s) {
  for (const auto& [k, v] : s.kv)
    if (!known_keys().count(k)) throw config_error("unknown config key: " + k);
}

bool Report::pass() const {
  if (!error.empty()) return false;
  for (const auto& [name, ok] : checks)
    if (!ok) return false;
  return true;
}

double Report::headline_value(const std::string& key, double fallback) const {
  for (const auto& [k, v] : headline)
    if (k == key) return v;
  return fallback;
}

namespace {

Report run_speed(const Scenario& s) {
  Report rep;
  rep.scenario_name = s.name;
  rep.mode = Mode::speed;
  const KernelSpec k = s.kernel();
  const ResourceProfile r = s.resource();
  const double d = s.get_double("sim.d", 1.0);
  const SpeedReport sr = c_star(k, d, r.r_plus);
  rep.headline = {{"c_star", sr.c_star},
                  {"lambda_star", sr.lambda_star},
                  {"r_value", sr.r_value},
                  {"d", d},
                  {"half_width", k.half_width}};
  rep.outcome = "speed";

  std::filesystem::create_directories(s.out_dir);
  auto csv = open_csv(s.out_dir / "speed.csv");
  csv << "c_star,lambda_star,r_value,d,kernel_family,half_width\n";
  csv << format_double(sr.c_star) << ',' << format_double(sr.lambda_star) << ','
      << format_double(sr.r_value) << ',' << format_double(d) << ',' << to_string(k.family)
      << ',' << format_double(k.half_width) << '\n';
  return rep;
}

Report run_simulate(const Scenario& s) {
  Report rep;
  rep.scenario_name = s.name;
  rep.mode = Mode::simulate;
  const SimConfig cfg = s.sim_config();
  const Grid1D grid = s.sim_grid();
  const Field u0 = s.initial_data(grid);
  const double cs = c_star(cfg.kernel, cfg.d, cfg.resource.r_plus).c_star;
  const double theta = s.get_double("front.theta", 0.5 * cfg.resource.r_plus);
  if (!(theta > 0.0 && theta < cfg.resource.r_plus))
    throw config_error("front.theta must lie in (0, r_plus)");

  std::filesystem::create_directories(s.out_dir);
  auto snaps = open_csv(s.out_dir / "snapshots.csv");
  snaps << "t,x,u\n";
  auto front = open_csv(s.out_dir / "front.csv");
  front << "t,front_x\n";

  FrontTrace trace;
  trace.threshold = theta;
  double sup_final = 0.0;
  double extinction_time = std::numeric_limits<double>::quiet_NaN();  // first sup < 1e-3
  integrate(cfg, u0, [&](double t, const Field& u) {
    const std::string ts = format_double(t);
    for (int i = 0; i < grid.n; ++i)
      snaps << ts << ',' << format_double(grid.x(i)) << ','
            << format_double(u.values[static_cast<size_t>(i)]) << '\n';
    const auto pos = front_position(u, theta, FrontSide::rightmost);
    trace.times.push_back(t);
    trace.positions.push_back(pos ? *pos : std::numeric_limits<double>::quiet_NaN());
    front << ts << ',' << (pos ? format_double(*pos) : "nan") << '\n';
    sup_final = u.max_value();
    if (std::isnan(extinction_time) && sup_final < 1e-3) extinction_time = t;
  });

  double slope = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
  const double window = s.get_double("front.window", 0.5);
  try {
    const FrontFit fit = front_speed(trace, window);
    slope = fit.slope;
    r2 = fit.r2;
  } catch (const numeric_error&) {
    // extinction runs legitimately lose the front
  }

  if (sup_final < 1e-3)
    rep.outcome = "extinction";
  else if (std::isfinite(slope) && slope > 0.25 * cs)
    rep.outcome = "spreading";
  else
    rep.outcome = "undetermined";

  rep.headline = {{"c_star_inf", cs},       {"c", cfg.c},
                  {"t_end", cfg.t_end},     {"sup_final", sup_final},
                  {"front_slope", slope},   {"front_r2", r2},
                  {"extinction_time", extinction_time}};
  if (s.has("accept.extinction_sup"))
    rep.checks.emplace_back("sup_final < accept.extinction_sup",
                            sup_final < s.get_double("accept.extinction_sup", 0.0));
  if (s.has("accept.front_speed_rel_tol"))
    rep.checks.emplace_back(
        "front slope within accept.front_speed_rel_tol of c_star",
        std::isfinite(slope) &&
            std::abs(slope - cs) / cs <= s.get_double("accept.front_speed_rel_tol", 0.0));
  return rep;
}

Report run_wave(const Scenario& s) {
  Report rep;
  rep.scenario_name = s.name;
  rep.mode = Mode::wave;
  const KernelSpec k = s.kernel();
  const ResourceProfile r = s.resource();
  const double d = s.get_double("sim.d", 1.0);
  if (!s.has("wave.c")) throw config_error("missing required key wave.c");
  const double c = s.get_double("wave.c", 0.0);
  const double tol = s.get_double("wave.tol", 1e-8);
  const int max_iter = s.get_int("wave.max_iter", 10000);
  const Grid1D grid = Grid1D::make(s.get_double("wave.xi_min", -40.0),
                                   s.get_double("wave.xi_max", 40.0),
                                   s.get_double("wave.h", 0.025));
  const double eps = s.get_double("wave.epsilon", 0.05 * r.r_plus);

  const WaveContext ctx = make_wave_context(k, d, c, r, grid);
  const IgnitionWave ign = ignition_wave(k, d, r.r_plus, eps, s.ignition_budget());
  const SubsolutionProfile sub = subsolution_profile(ign, r, grid);
  const WaveProfile prof = iterate_wave(ctx, sub, tol, max_iter);
  const double cs = c_star(k, d, r.r_plus).c_star;

  std::filesystem::create_directories(s.out_dir);
  auto csv = open_csv(s.out_dir / "wave.csv");
  csv << "xi,V,U\n";
  const Field Vf = prof.as_field(r.r_plus);
  for (int i = 0; i < grid.n; ++i)
    csv << format_double(grid.x(i)) << ',' << format_double(prof.V[static_cast<size_t>(i)])
        << ',' << format_double(Vf.interpolate(-grid.x(i))) << '\n';

  rep.outcome = "wave";
  rep.headline = {{"c", c},
                  {"c_star_inf", cs},
                  {"c_eps", ign.speed},
                  {"epsilon", eps},
                  {"iterations", static_cast<double>(prof.iterations)},
                  {"residual_sup", prof.residual_sup},
                  {"fixpoint_gap", prof.fixpoint_gap},
                  {"left_value", prof.left_value},
                  {"right_value", prof.right_value}};
  if (s.has("accept.wave_residual_max"))
    rep.checks.emplace_back("residual_sup <= accept.wave_residual_max",
                            prof.residual_sup <= s.get_double("accept.wave_residual_max", 0.0));
  if (s.has("accept.wave_right_max"))
    rep.checks.emplace_back("right_value <= accept.wave_right_max",
                            prof.right_value <= s.get_double("accept.wave_right_max", 0.0));
  if (s.has("accept.wave_left_rel_tol"))
    rep.checks.emplace_back(
        "left_value within accept.wave_left_rel_tol of r_plus",
        std::abs(prof.left_value - r.r_plus) / r.r_plus <=
            s.get_double("accept.wave_left_rel_tol", 0.0));
  return rep;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double("sweep.values", item));
  }
  return out;
}

Report run_sweep_mode(const Scenario& s) {
  if (!s.has("sweep.axis")) throw config_error("missing required key sweep.axis");
  const std::string axis = s.get_string("sweep.axis", "");
  const std::vector<double> values = parse_values(s.get_string("sweep.values", ""));

  Scenario base = s;
  base.set("mode", std::string(to_string(mode_from_string(s.get_string("sweep.mode", "simulate")))));
  const auto reports = run_sweep(base, axis, values);

  std::filesystem::create_directories(s.out_dir);
  auto csv = open_csv(s.out_dir / "sweep.csv");
  csv << "value,outcome,c_star,sup_final,front_slope,c_eps,wave_residual,error\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    const Report& r = reports[i];
    auto opt = [&](const char* key) {
      const double v = r.headline_value(key, std::numeric_limits<double>::quiet_NaN());
      return std::isnan(v) ? std::string() : format_double(v);
    };
    csv << format_double(values[i]) << ',' << r.outcome << ',' << opt("c_star_inf") << ','
        << opt("sup_final") << ',' << opt("front_slope") << ',' << opt("c_eps") << ','
        << opt("residual_sup") << ',' << r.error << '\n';
  }

  Report rep;
  rep.scenario_name = s.name;
  rep.mode = Mode::sweep;
  rep.outcome = "sweep";
  rep.headline = {{"runs", static_cast<double>(reports.size())}};
  bool all_ok = true;
  for (const auto& r : reports) all_ok = all_ok && r.pass();
  rep.checks.emplace_back("all sweep rows completed and passed", all_ok);
  return rep;
}

}  // namespace

Report run_scenario(const Scenario& s) {
  validate_keys(s);
  switch (s.mode) {
    case Mode::speed: return run_speed(s);
    case Mode::simulate: return run_simulate(s);
    case Mode::wave: return run_wave(s);
    case Mode::sweep: return run_sweep_mode(s);
    case Mode::selftest: {
      Report rep;
      rep.scenario_name = s.name;
      rep.mode = Mode::selftest;
      std::ostringstream sink;
      const int failures = selftest(s.seed, sink);
      rep.outcome = "selftest";
      rep.headline = {{"failures", static_cast<double>(failures)}};
      rep.checks.emplace_back("all property suites pass", failures == 0);
      return rep;
    }
  }
  throw config_error("unhandled mode");
}

std::vector<Report> run_sweep(const Scenario& base, const std::string& axis,
                              const std::vector<double>& values) {
  if (!known_keys().count(axis)) throw config_error("sweep axis is not a config key: " + axis);
  std::vector<Report> out;
  out.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    Scenario run = base;
    run.kv.erase("sweep.axis");
    run.kv.erase("sweep.values");
    run.kv.erase("sweep.mode");
    run.set(axis, format_double(values[i]));
    run.out_dir = base.out_dir / ("run_" + std::to_string(i));
    run.name = base.name + "[" + axis + "=" + format_double(values[i]) + "]";
    try {
      out.push_back(run_scenario(run));
    } catch (const std::exception& e) {
      Report rep;
      rep.scenario_name = run.name;
      rep.mode = run.mode;
      rep.outcome = "error";
      rep.error = e.what();
      out.push_back(rep);
    }
  }
  return out;
}

void write_report(const Report& r, const std::filesystem::path& out_dir, std::ostream& echo) {
  std::filesystem::create_directories(out_dir);
  std::ofstream txt(out_dir / "report.txt", std::ios::binary);
  auto emit = [&](const std::string& line) {
    txt << line << '\n';
    echo << line << '\n';
  };
  emit("scenario: " + r.scenario_name);
  emit("mode: " + std::string(to_string(r.mode)));
  emit("outcome: " + r.outcome);
  for (const auto& [k, v] : r.headline) emit(k + " = " + format_double(v));
  for (const auto& [k, ok] : r.checks) emit(std::string(ok ? "PASS " : "FAIL ") + k);
  if (!r.error.empty()) emit("error: " + r.error);
  emit(std::string("result: ") + (r.pass() ? "PASS" : "FAIL"));
}

}  // namespace nlshift
