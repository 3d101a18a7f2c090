#ifndef NLSHIFT_SCENARIO_HPP
#define NLSHIFT_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nlshift/dynamics.hpp"
#include "nlshift/waves.hpp"

namespace nlshift {

enum class Mode { speed, simulate, wave, sweep, selftest };

Mode mode_from_string(std::string_view name);
std::string_view to_string(Mode mode);

// Flat dotted-key configuration; CLI flags override file values.
struct Scenario {
  std::string name = "default";
  Mode mode = Mode::speed;
  std::map<std::string, std::string> kv;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1u;

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  KernelSpec kernel() const;
  ResourceProfile resource() const;
  Grid1D sim_grid() const;
  SimConfig sim_config() const;       // requires sim.c / sim.t_end for simulate
  Field initial_data(const Grid1D& grid) const;
  IgnitionBudget ignition_budget() const;
};

// Loads `key = value` lines; '#' starts a comment.  Unknown keys are errors.
Scenario load_scenario(const std::filesystem::path& config_path);
void validate_keys(const Scenario& s);

struct Report {
  std::string scenario_name;
  Mode mode = Mode::speed;
  std::string outcome;                                  // simulate: extinction/spreading/...
  std::vector<std::pair<std::string, double>> headline;  // named numbers, in print order
  std::vector<std::pair<std::string, bool>> checks;      // threshold verdicts
  std::string error;                                     // per-run failure (sweep rows)

  bool pass() const;
  double headline_value(const std::string& key, double fallback) const;
};

Report run_scenario(const Scenario& s);
std::vector<Report> run_sweep(const Scenario& base, const std::string& axis,
                              const std::vector<double>& values);
int selftest(std::uint64_t seed, std::ostream& out);

void write_report(const Report& r, const std::filesystem::path& out_dir, std::ostream& echo);

// %.17g formatting, used everywhere CSV bytes must be reproducible
std::string format_double(double v);

}  // namespace nlshift

#endif
