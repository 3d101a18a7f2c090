#ifndef NLSHIFT_WAVES_HPP
#define NLSHIFT_WAVES_HPP

#include <optional>

#include "nlshift/dynamics.hpp"
#include "nlshift/environment.hpp"
#include "nlshift/grid.hpp"
#include "nlshift/kernels.hpp"

namespace nlshift {

// Traveling wave of the ignition-type auxiliary equation
// u_t = d (J*u - u) + f_eps(u), connecting r_inf - eps to -eps.  Computed by
// long-time simulation from a decreasing step, recentered at the final
// mid-level crossing.
struct IgnitionWave {
  Field profile;             // V_eps on the recentered xi grid
  double speed = 0.0;        // c_eps, least-squares front slope
  double epsilon = 0.0;
  double shift = 0.0;        // xi0: zero crossing of the stored profile
  double r_inf = 0.0;
  double residual_sup = 0.0; // defect of the wave equation with the fitted speed
  double speed_integral = 0.0;  // (1/r_inf) int f_eps(V): independent speed estimate
  double fit_r2 = 0.0;
};

struct IgnitionBudget {
  double t_end = 80.0;
  double dt = 0.05;
  double x_min = -40.0;
  double x_max = 120.0;
  double h = 0.025;
  double fit_window = 0.5;     // trailing fraction of the trace used for the slope
  double snapshot_dt = 0.5;    // trace sampling interval
};

IgnitionWave ignition_wave(const KernelSpec& kernel, double d, double r_inf, double eps,
                           const IgnitionBudget& budget = {});

// max{V_eps(. - shift), 0}, translated so that r(-xi0) >= r_inf - eps.
struct SubsolutionProfile {
  Field field;
  double xi0 = 0.0;  // kink location (zero crossing) on the wave grid
};
SubsolutionProfile subsolution_profile(const IgnitionWave& wave, const ResourceProfile& r,
                                       const Grid1D& grid);

// min{r_inf, r_inf e^{-mu1 (xi - xi1)}} with mu1 the root of
// d (M(mu) - 1) + c mu + r(-xi1) = 0 and xi1 a grid node with r(-xi1) < 0.
struct SupersolutionProfile {
  Field field;
  double mu1 = 0.0;
  double xi1 = 0.0;
};
SupersolutionProfile supersolution_profile(const KernelSpec& kernel, double d, double c,
                                           const ResourceProfile& r, const Grid1D& grid);

// Everything the operators H and F need for one wave computation.
struct WaveContext {
  KernelSpec kernel;
  KernelStencil stencil;
  ResourceProfile resource;
  Grid1D grid;
  double d = 1.0;
  double c = 0.0;
  double beta = 0.0;     // d + 2 r_plus - r_minus
  double tail_head = 0.0;  // F value inherited from z < xi_min (flat-left closure)
  bool degenerate = false;  // e^{-beta h / c} underflows; F collapses to H/beta
  double decay = 0.0, w_left = 0.0, w_right = 0.0;  // causal recurrence weights
};

WaveContext make_wave_context(const KernelSpec& kernel, double d, double c,
                              const ResourceProfile& r, const Grid1D& grid);

// H(V) = beta V + d (J*V - V) + V (r(-xi) - V); order preserving on [0, r_inf].
Field H_operator(const Field& V, const ResourceProfile& r, const KernelStencil& st, double d,
                 double beta);

// F(V)(xi) = (1/c) int_{-inf}^{xi} e^{-(beta/c)(xi - z)} H(V)(z) dz via the
// causal exponential-integrator recurrence.
Field F_operator(const Field& V, const WaveContext& ctx);

struct WaveProfile {
  Grid1D grid;
  std::vector<double> V;
  double c = 0.0;
  double beta = 0.0;
  int iterations = 0;
  double residual_sup = 0.0;       // centered-difference defect of the wave ODE
  double fixpoint_gap = 0.0;       // sup |F(V) - V| at exit
  double left_value = 0.0;
  double right_value = 0.0;
  // worst certificate violations observed across the iteration (diagnostics)
  double worst_monotone_n = 0.0;   // min over n, xi of V_n - V_{n+1}
  double worst_monotone_xi = 0.0;  // max over n of forward differences
  double worst_above_sub = 0.0;    // min over n, xi of V_n - Vsub
  double worst_below_super = 0.0;  // min over n, xi of Vsuper - V_n

  Field as_field(double r_inf) const;
};

// Monotone iteration V_{n+1} = F(V_n) from the super-solution; `sub` may be a
// precomputed sub-solution (shared across wave speeds), otherwise one is
// built from a fresh ignition wave with the given epsilon.
WaveProfile iterate_wave(const WaveContext& ctx, const SubsolutionProfile& sub, double tol,
                         int max_iter);
WaveProfile iterate_wave(const KernelSpec& kernel, double d, double c, const ResourceProfile& r,
                         const Grid1D& grid, double epsilon, double tol, int max_iter,
                         const IgnitionBudget& budget = {});

// Sup-norm defect of c V' = d (J*V - V) + V (r(-xi) - V) with centered V',
// over interior points at least 2L from each boundary.
double wave_residual(const WaveProfile& profile, const WaveContext& ctx);

// Transport the reflected profile U(x) = V(-x) through the simulator for
// t = horizon/c and report sup |u(t, x) - U(x - c t)| over the common
// interior.
double wave_vs_simulation(const WaveProfile& profile, const WaveContext& ctx, double horizon,
                          double pad = 20.0);

}  // namespace nlshift

#endif
