// Forced traveling waves: the profile equation
//   c V'(xi) = d (J*V - V)(xi) + V(xi) (r(-xi) - V(xi))
// is solved by monotone iteration of the causal integral operator F between
// an ignition-wave sub-solution and an exponential super-solution.

#include "nlshift/waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlshift/dispersion.hpp"
#include "nlshift/errors.hpp"
#include "nlshift/quadrature.hpp"

namespace nlshift {

namespace {

constexpr double kBoxSlack = 1e-9;

double ignition_reaction(double u, double r_inf, double eps) {
  return u >= 0.0 ? u * (r_inf - eps - u) : 0.0;
}

std::vector<double> convolve_values(const std::vector<double>& u, double ext_l, double ext_r,
                                    const KernelStencil& st) {
  const int n = static_cast<int>(u.size());
  const int K = st.half_extent;
  std::vector<double> pad(static_cast<size_t>(n + 2 * K));
  std::fill(pad.begin(), pad.begin() + K, ext_l);
  std::copy(u.begin(), u.end(), pad.begin() + K);
  std::fill(pad.end() - K, pad.end(), ext_r);
  std::vector<double> out(static_cast<size_t>(n));
  const double* w = st.weights.data();
  const int m = 2 * K + 1;
  for (int i = 0; i < n; ++i) {
    const double* p = pad.data() + i;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += w[j] * p[j];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

std::vector<double> convolve_field(const Field& u, const KernelStencil& st) {
  return convolve_values(u.values, u.ext_left, u.ext_right, st);
}

}  // namespace

IgnitionWave ignition_wave(const KernelSpec& kernel, double d, double r_inf, double eps,
                           const IgnitionBudget& budget) {
  if (!(r_inf > 0.0)) throw config_error("ignition_wave: r_inf must be positive");
  if (!(eps > 0.0 && eps < r_inf / 5.0))
    throw config_error("ignition_wave: epsilon must lie in (0, r_inf/5)");
  const Grid1D grid = Grid1D::make(budget.x_min, budget.x_max, budget.h);
  const KernelStencil st = build_stencil(kernel, budget.h);
  const double L = kernel.half_width;

  Field u(grid, 0.0, r_inf - eps, -eps);
  for (int i = 0; i < grid.n; ++i)
    u.values[static_cast<size_t>(i)] = grid.x(i) < 0.0 ? r_inf - eps : -eps;

  const double theta = 0.5 * r_inf - eps;  // mid level between the two states
  const int steps = static_cast<int>(std::ceil(budget.t_end / budget.dt));
  const double dt = budget.t_end / steps;
  const int snap = std::max(1, static_cast<int>(std::lround(budget.snapshot_dt / dt)));

  FrontTrace trace;
  trace.threshold = theta;
  auto record = [&](double t) {
    auto pos = front_position(u, theta, FrontSide::rightmost);
    trace.times.push_back(t);
    trace.positions.push_back(pos ? *pos : std::numeric_limits<double>::quiet_NaN());
  };

  std::vector<double> k1(u.values.size()), k2(k1), k3(k1), k4(k1), tmp(k1);
  auto rhs = [&](const std::vector<double>& v, std::vector<double>& out) {
    auto conv = convolve_values(v, r_inf - eps, -eps, st);
    for (size_t i = 0; i < v.size(); ++i)
      out[i] = d * (conv[i] - v[i]) + ignition_reaction(v[i], r_inf, eps);
  };

  record(0.0);
  for (int s = 0; s < steps; ++s) {
    rhs(u.values, k1);
    for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = u.values[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = u.values[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = u.values[i] + dt * k3[i];
    rhs(tmp, k4);
    for (size_t i = 0; i < tmp.size(); ++i)
      u.values[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    for (double& v : u.values) {
      if (!std::isfinite(v)) throw numeric_error("ignition_wave: instability (non-finite value)");
      if (v < -eps - kBoxSlack || v > r_inf - eps + kBoxSlack)
        throw numeric_error("ignition_wave: state left [-eps, r_inf - eps]");
      v = std::clamp(v, -eps, r_inf - eps);
    }
    if ((s + 1) % snap == 0 || s + 1 == steps) record((s + 1) * dt);
  }

  for (double p : trace.positions)
    if (std::isnan(p)) throw numeric_error("ignition_wave: front not established within budget");
  const double x_c = trace.positions.back();
  if (x_c + 2.0 * L > grid.x_max || x_c - 2.0 * L < grid.x_min)
    throw numeric_error("ignition_wave: front left the domain; enlarge the budget window");

  const FrontFit fit = front_speed(trace, budget.fit_window);

  // recenter the final snapshot so the mid-level crossing sits at xi = 0
  const double lo = std::ceil((grid.x_min - x_c) / budget.h) * budget.h;
  const double hi = std::floor((grid.x_max - x_c) / budget.h) * budget.h;
  const Grid1D pgrid = Grid1D::make(lo, hi, budget.h);
  Field profile(pgrid, 0.0, r_inf - eps, -eps);
  for (int i = 0; i < pgrid.n; ++i)
    profile.values[static_cast<size_t>(i)] = u.interpolate(pgrid.x(i) + x_c);

  for (int i = 0; i + 1 < pgrid.n; ++i)
    if (profile.values[static_cast<size_t>(i + 1)] >
        profile.values[static_cast<size_t>(i)] + kBoxSlack)
      throw numeric_error("ignition_wave: non-monotone final profile");

  IgnitionWave wave;
  wave.epsilon = eps;
  wave.r_inf = r_inf;
  wave.speed = fit.slope;
  wave.fit_r2 = fit.r2;

  // zero crossing of the recentered profile
  double xi0 = pgrid.x_max;
  for (int i = 0; i + 1 < pgrid.n; ++i) {
    const double a = profile.values[static_cast<size_t>(i)];
    const double b = profile.values[static_cast<size_t>(i + 1)];
    if (a >= 0.0 && b < 0.0) {
      xi0 = pgrid.x(i) + pgrid.h * a / (a - b);
      break;
    }
  }
  wave.shift = xi0;

  // defect of the profile equation with the fitted speed; the cells within h
  // of xi0 are excluded: the wave is C^1 but not C^2 at its zero crossing
  // (f_eps' jumps there), so the centered difference is O(h) at that corner
  auto conv = convolve_field(profile, st);
  double res = 0.0;
  double mass = 0.0;
  for (int i = 1; i + 1 < pgrid.n; ++i) {
    const double v = profile.values[static_cast<size_t>(i)];
    mass += ignition_reaction(v, r_inf, eps) * pgrid.h;
    if (pgrid.x(i) < pgrid.x_min + 2.0 * L || pgrid.x(i) > pgrid.x_max - 2.0 * L) continue;
    if (std::abs(pgrid.x(i) - xi0) <= pgrid.h + 1e-12) continue;
    const double vp = (profile.values[static_cast<size_t>(i + 1)] -
                       profile.values[static_cast<size_t>(i - 1)]) /
                      (2.0 * pgrid.h);
    const double defect =
        wave.speed * vp + d * (conv[static_cast<size_t>(i)] - v) + ignition_reaction(v, r_inf, eps);
    res = std::max(res, std::abs(defect));
  }
  wave.residual_sup = res;
  wave.speed_integral = mass / r_inf;
  wave.profile = std::move(profile);
  if (wave.residual_sup > 1e-3)
    throw numeric_error("ignition_wave: profile residual exceeds 1e-3; refine the budget");
  return wave;
}

SubsolutionProfile subsolution_profile(const IgnitionWave& wave, const ResourceProfile& r,
                                       const Grid1D& grid) {
  r.validate();
  const double eps = wave.epsilon;
  if (std::abs(wave.r_inf - r.r_plus) > 1e-12)
    throw config_error("subsolution_profile: ignition wave was built for a different r_plus");
  // r(-xi0) >= r_plus - eps with a little slack for the grid snap
  const double q = level_crossing(r, r.r_plus - eps);
  const double xi0_target = -q - 0.5;
  if (xi0_target < grid.x_min + 2.0 * wave.profile.grid.h ||
      xi0_target > grid.x_max - 2.0 * wave.profile.grid.h)
    throw config_error("subsolution_profile: translation infeasible on this grid");

  const double shift = xi0_target - wave.shift;
  Field out(grid, 0.0, r.r_plus - eps, 0.0);
  double raw_prev = 0.0;
  double xi0_actual = xi0_target;
  for (int i = 0; i < grid.n; ++i) {
    const double raw = wave.profile.interpolate(grid.x(i) - shift);
    out.values[static_cast<size_t>(i)] = std::max(raw, 0.0);
    if (i > 0 && raw_prev >= 0.0 && raw < 0.0)
      xi0_actual = grid.x(i - 1) + grid.h * raw_prev / (raw_prev - raw);
    raw_prev = raw;
  }
  return {std::move(out), xi0_actual};
}

SupersolutionProfile supersolution_profile(const KernelSpec& kernel, double d, double c,
                                           const ResourceProfile& r, const Grid1D& grid) {
  r.validate();
  if (c <= 0.0) throw config_error("supersolution_profile: c must be positive");
  const double L = kernel.half_width;
  // xi1: grid node with r(-xi1) < 0, placed where r(-xi1) = r_minus/2
  const double xi1_raw = -level_crossing(r, 0.5 * r.r_minus);
  const int i1 = static_cast<int>(std::lround((xi1_raw - grid.x_min) / grid.h));
  if (i1 < 1 || i1 >= grid.n - 1)
    throw config_error("supersolution_profile: grid too narrow to realize r(-xi1) < 0");
  const double xi1 = grid.x(i1);
  const double r_neg = r.evaluate(-xi1);
  if (r_neg >= 0.0)
    throw config_error("supersolution_profile: snapped xi1 does not give r(-xi1) < 0");
  if (xi1 < grid.x_min + L || xi1 > grid.x_max - L)
    throw config_error("supersolution_profile: xi1 too close to the grid boundary");

  const double mu1 = mu_root(kernel, d, c, r_neg);
  Field out(grid, 0.0, r.r_plus, 0.0);
  for (int i = 0; i < grid.n; ++i)
    out.values[static_cast<size_t>(i)] =
        std::min(r.r_plus, r.r_plus * std::exp(-mu1 * (grid.x(i) - xi1)));
  return {std::move(out), mu1, xi1};
}

WaveContext make_wave_context(const KernelSpec& kernel, double d, double c,
                              const ResourceProfile& r, const Grid1D& grid) {
  r.validate();
  if (c <= 0.0) throw config_error("wave: c must be positive");
  if (d <= 0.0) throw config_error("wave: d must be positive");
  WaveContext ctx;
  ctx.kernel = kernel;
  ctx.stencil = build_stencil(kernel, grid.h);
  ctx.resource = r;
  ctx.grid = grid;
  ctx.d = d;
  ctx.c = c;
  ctx.beta = d + 2.0 * r.r_plus - r.r_minus;

  const double zeta = ctx.beta / c;
  const double z = zeta * grid.h;
  if (z > 690.0) {
    // e^{-beta h/c} underflows; the causal integral degenerates to H/beta
    ctx.degenerate = true;
    return ctx;
  }
  const auto w = exp_integrator_weights(z);
  ctx.decay = w.decay;
  ctx.w_left = w.w_left;
  ctx.w_right = w.w_right;

  // closure of the causal integral over z < xi_min, assuming the profile sits
  // flat at r_plus there: H ~ beta r_plus + r_plus (r(-z) - r_plus)
  const double r_plus = r.r_plus;
  auto h_flat = [&](double tau) {
    return std::exp(-zeta * tau) *
           (ctx.beta * r_plus + r_plus * (r.evaluate(-(grid.x_min - tau)) - r_plus));
  };
  const double tau_max = 45.0 / zeta;
  // H_flat <= beta r_plus, so the exact tail value never exceeds r_plus;
  // clamping shields the box invariant from quadrature roundoff
  ctx.tail_head = std::min(adaptive_simpson(h_flat, 0.0, tau_max, 1e-12) / c, r_plus);
  return ctx;
}

Field H_operator(const Field& V, const ResourceProfile& r, const KernelStencil& st, double d,
                 double beta) {
  const double r_plus = r.r_plus;
  for (double v : V.values)
    if (v < -kBoxSlack || v > r_plus + kBoxSlack)
      throw config_error("H_operator: V outside the box [0, r_plus]");
  auto conv = convolve_field(V, st);
  Field out = V;
  for (int i = 0; i < V.grid.n; ++i) {
    const double v = V.values[static_cast<size_t>(i)];
    out.values[static_cast<size_t>(i)] =
        beta * v + d * (conv[static_cast<size_t>(i)] - v) + v * (r.evaluate(-V.grid.x(i)) - v);
  }
  return out;
}

Field F_operator(const Field& V, const WaveContext& ctx) {
  const Field g = H_operator(V, ctx.resource, ctx.stencil, ctx.d, ctx.beta);
  Field out = V;
  if (ctx.degenerate) {
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = g.values[i] / ctx.beta;
    return out;
  }
  const double scale = ctx.grid.h / ctx.c;
  out.values[0] = ctx.tail_head;
  for (int i = 1; i < ctx.grid.n; ++i)
    out.values[static_cast<size_t>(i)] =
        ctx.decay * out.values[static_cast<size_t>(i - 1)] +
        scale * (ctx.w_left * g.values[static_cast<size_t>(i - 1)] +
                 ctx.w_right * g.values[static_cast<size_t>(i)]);
  return out;
}

Field WaveProfile::as_field(double r_inf) const {
  Field f(grid, 0.0, r_inf, 0.0);
  f.values = V;
  return f;
}

WaveProfile iterate_wave(const WaveContext& ctx, const SubsolutionProfile& sub, double tol,
                         int max_iter) {
  if (tol <= 0.0) throw config_error("iterate_wave: tol must be positive");
  const SupersolutionProfile super =
      supersolution_profile(ctx.kernel, ctx.d, ctx.c, ctx.resource, ctx.grid);
  if (sub.field.grid.n != ctx.grid.n)
    throw config_error("iterate_wave: sub-solution grid does not match");
  for (int i = 0; i < ctx.grid.n; ++i)
    if (sub.field.values[static_cast<size_t>(i)] >
        super.field.values[static_cast<size_t>(i)] + 1e-12)
      throw numeric_error("iterate_wave: sub-solution exceeds super-solution");

  WaveProfile prof;
  prof.grid = ctx.grid;
  prof.c = ctx.c;
  prof.beta = ctx.beta;
  prof.worst_monotone_n = 0.0;
  prof.worst_monotone_xi = 0.0;
  prof.worst_above_sub = ctx.resource.r_plus;
  prof.worst_below_super = ctx.resource.r_plus;

  Field V = super.field;
  double gap = 0.0;
  int n_iter = 0;
  for (int it = 0; it < max_iter; ++it) {
    Field Vn = F_operator(V, ctx);
    gap = 0.0;
    for (int i = 0; i < ctx.grid.n; ++i) {
      const size_t k = static_cast<size_t>(i);
      gap = std::max(gap, std::abs(Vn.values[k] - V.values[k]));
      prof.worst_monotone_n = std::min(prof.worst_monotone_n, V.values[k] - Vn.values[k]);
      prof.worst_above_sub =
          std::min(prof.worst_above_sub, Vn.values[k] - sub.field.values[k]);
      prof.worst_below_super =
          std::min(prof.worst_below_super, super.field.values[k] - Vn.values[k]);
      if (i > 0)
        prof.worst_monotone_xi =
            std::max(prof.worst_monotone_xi, Vn.values[k] - Vn.values[k - 1]);
    }
    V = std::move(Vn);
    n_iter = it + 1;
    if (gap <= tol) break;
  }
  if (gap > tol)
    throw numeric_error("iterate_wave: max_iter = " + std::to_string(max_iter) +
                        " exceeded before the iterates settled");

  double collapse = 0.0;
  for (int i = 0; i < ctx.grid.n; ++i)
    collapse = std::min(collapse, V.values[static_cast<size_t>(i)] -
                                      sub.field.values[static_cast<size_t>(i)]);
  if (collapse < -1e-6)
    throw numeric_error(
        "iterate_wave: limit collapsed below the sub-solution (tail/translation misconfigured)");

  const Field FV = F_operator(V, ctx);
  double fp_gap = 0.0;
  for (size_t i = 0; i < V.values.size(); ++i)
    fp_gap = std::max(fp_gap, std::abs(FV.values[i] - V.values[i]));

  prof.iterations = n_iter;
  prof.fixpoint_gap = fp_gap;
  prof.V = V.values;
  prof.left_value = V.values.front();
  prof.right_value = V.values.back();
  prof.residual_sup = wave_residual(prof, ctx);
  return prof;
}

WaveProfile iterate_wave(const KernelSpec& kernel, double d, double c, const ResourceProfile& r,
                         const Grid1D& grid, double epsilon, double tol, int max_iter,
                         const IgnitionBudget& budget) {
  const WaveContext ctx = make_wave_context(kernel, d, c, r, grid);
  const IgnitionWave wave = ignition_wave(kernel, d, r.r_plus, epsilon, budget);
  const SubsolutionProfile sub = subsolution_profile(wave, r, grid);
  return iterate_wave(ctx, sub, tol, max_iter);
}

double wave_residual(const WaveProfile& profile, const WaveContext& ctx) {
  const Field V = profile.as_field(ctx.resource.r_plus);
  const auto conv = convolve_field(V, ctx.stencil);
  const double L = ctx.kernel.half_width;
  double res = 0.0;
  for (int i = 1; i + 1 < ctx.grid.n; ++i) {
    const double x = ctx.grid.x(i);
    if (x < ctx.grid.x_min + 2.0 * L || x > ctx.grid.x_max - 2.0 * L) continue;
    const size_t k = static_cast<size_t>(i);
    const double vp = (V.values[k + 1] - V.values[k - 1]) / (2.0 * ctx.grid.h);
    const double defect = ctx.c * vp - ctx.d * (conv[k] - V.values[k]) -
                          V.values[k] * (ctx.resource.evaluate(-x) - V.values[k]);
    res = std::max(res, std::abs(defect));
  }
  return res;
}

double wave_vs_simulation(const WaveProfile& profile, const WaveContext& ctx, double horizon,
                          double pad) {
  if (horizon <= 0.0) throw config_error("wave_vs_simulation: horizon must be positive");
  const double T = horizon / ctx.c;
  const double shift = horizon;  // c * T
  const Field V = profile.as_field(ctx.resource.r_plus);
  const Grid1D wg = profile.grid;
  const Grid1D sim_grid = Grid1D::make(-wg.x_max - pad, -wg.x_min + shift + pad, wg.h);

  Field u0(sim_grid, 0.0, 0.0, ctx.resource.r_plus);
  for (int i = 0; i < sim_grid.n; ++i)
    u0.values[static_cast<size_t>(i)] = V.interpolate(-sim_grid.x(i));

  SimConfig cfg;
  cfg.d = ctx.d;
  cfg.c = ctx.c;
  cfg.kernel = ctx.kernel;
  cfg.resource = ctx.resource;
  cfg.t_end = T;
  cfg.snapshot_stride = 1 << 30;
  Field u_final;
  integrate(cfg, u0, [&](double, const Field& u) { u_final = u; });

  const double L = ctx.kernel.half_width;
  double sup = 0.0;
  for (int i = 0; i < sim_grid.n; ++i) {
    const double x = sim_grid.x(i);
    if (x < sim_grid.x_min + 2.0 * L || x > sim_grid.x_max - 2.0 * L) continue;
    const double xi = -(x - shift);
    if (xi < wg.x_min + 2.0 * L || xi > wg.x_max - 2.0 * L) continue;
    sup = std::max(sup, std::abs(u_final.values[static_cast<size_t>(i)] - V.interpolate(xi)));
  }
  return sup;
}

}  // namespace nlshift
