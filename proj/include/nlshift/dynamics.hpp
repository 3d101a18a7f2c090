#ifndef NLSHIFT_DYNAMICS_HPP
#define NLSHIFT_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "nlshift/environment.hpp"
#include "nlshift/grid.hpp"
#include "nlshift/kernels.hpp"

namespace nlshift {

// Cauchy problem u_t = d (J*u - u) + u (r(x - c t) - u).
struct SimConfig {
  double d = 1.0;
  double c = 0.0;
  KernelSpec kernel;
  ResourceProfile resource;
  double dt = 0.0;          // <= 0 selects the default 0.4/(2d + rho)
  double t_end = 0.0;
  int snapshot_stride = 1;  // snapshots every this many steps (plus t=0 and t_end)
  double rho = 0.0;         // <= 0 selects the default 2 r_plus - r_minus + 0.1

  double rho_effective() const;
  double dt_effective() const;
  // invariants: rho > 2 r_plus - r_minus, dt (2d + rho) <= 0.9, domain wide
  // enough for the run (width > c* t_end + 20 L)
  void validate(const Grid1D& grid) const;
};

// d (sum_k w_k u(x - k h) - u(x)); stencil spacing must match the grid.
Field nonlocal_op(const Field& u, const KernelStencil& st, double d);

// One RK4 step of the full equation from time t.  The result is clipped to
// [0, r_plus] only when the overshoot is within 1e-9; anything larger throws.
Field step(const Field& u, double t, const SimConfig& cfg, const KernelStencil& st, double dt);

struct Snapshot {
  double t = 0.0;
  Field u;
};

std::vector<Snapshot> integrate(const SimConfig& cfg, const Field& u0);
void integrate(const SimConfig& cfg, const Field& u0,
               const std::function<void(double, const Field&)>& on_snapshot);

// Truncated series form of the linear semigroup P(t), e^{-dt} sum (dt)^k/k! a_k.
// Requires terms >= ceil(3 d t) + 20.
Field semigroup_series(const Field& psi, double t, double d, const KernelStencil& st, int terms);

// RK4 oracle for the reaction-free equation u_t = d (J*u - u).
Field integrate_linear(const Field& psi, double t, double d, const KernelStencil& st, double dt);

// Successive approximations of the mild-solution operator from constant data
// (0 below, r_plus above).  Returns the iterates' values at time t, one Field
// per iteration count 1..iterations.
struct PicardOptions {
  int substeps = 250;
  double t_cap = 1.0;  // series budget: reject larger horizons
};
std::vector<Field> picard_iterates(const SimConfig& cfg, const Field& u0, double t,
                                   int iterations, bool from_above,
                                   const PicardOptions& opt = {});
Field picard_solve(const SimConfig& cfg, const Field& u0, double t, int iterations,
                   bool from_above, const PicardOptions& opt = {});

// Runs both ladders and returns (lower, upper) at time t once their sup-norm
// gap closes below gap_tol; errors if the iteration budget is exhausted first.
std::pair<Field, Field> picard_bracket(const SimConfig& cfg, const Field& u0, double t,
                                       int max_iterations, double gap_tol = 1e-4,
                                       const PicardOptions& opt = {});

enum class FrontSide { rightmost, leftmost };

// Linear-interpolated crossing of u through theta; empty when u < theta
// everywhere.
std::optional<double> front_position(const Field& u, double theta, FrontSide side);

struct FrontTrace {
  std::vector<double> times;
  std::vector<double> positions;  // NaN marks a lost front
  double threshold = 0.0;
};

struct FrontFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int samples = 0;
};

// Least-squares slope over the trailing `window` fraction of the trace.
FrontFit front_speed(const FrontTrace& trace, double window);

}  // namespace nlshift

#endif
