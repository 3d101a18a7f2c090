// Method-of-lines simulation of u_t = d (J*u - u) + u (r(x - ct) - u):
// stencil convolution in space, explicit RK4 in time, plus the two linear
// oracles (truncated semigroup series, linear RK4) and the Picard ladders of
// the mild-solution operator.

#include "nlshift/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlshift/dispersion.hpp"
#include "nlshift/errors.hpp"
#include "nlshift/quadrature.hpp"

namespace nlshift {

namespace {

constexpr double kBoxSlack = 1e-9;

void check_spacing(const Field& u, const KernelStencil& st) {
  if (std::abs(u.grid.h - st.spacing) > 1e-12 * std::max(1.0, u.grid.h))
    throw config_error("stencil spacing does not match the grid spacing");
}

// padded correlation: out[i] = sum_k w_{k} u(x_i - k h); relies on the
// symmetry of the weights
void convolve_raw(const std::vector<double>& u, double ext_l, double ext_r,
                  const KernelStencil& st, std::vector<double>& pad, std::vector<double>& out) {
  const int n = static_cast<int>(u.size());
  const int K = st.half_extent;
  pad.resize(static_cast<size_t>(n + 2 * K));
  std::fill(pad.begin(), pad.begin() + K, ext_l);
  std::copy(u.begin(), u.end(), pad.begin() + K);
  std::fill(pad.end() - K, pad.end(), ext_r);
  out.resize(static_cast<size_t>(n));
  const double* w = st.weights.data();
  const int m = 2 * K + 1;
  for (int i = 0; i < n; ++i) {
    const double* p = pad.data() + i;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += w[j] * p[j];
    out[static_cast<size_t>(i)] = acc;
  }
}

struct Workspace {
  std::vector<double> pad, conv, k1, k2, k3, k4, tmp;
};

// RK4 stage evaluation of the reaction-dispersal right-hand side
void rhs_eval(const std::vector<double>& u, double ext_l, double ext_r, double t,
              const SimConfig& cfg, const KernelStencil& st, const Grid1D& grid, Workspace& ws,
              std::vector<double>& out) {
  convolve_raw(u, ext_l, ext_r, st, ws.pad, ws.conv);
  out.resize(u.size());
  for (int i = 0; i < grid.n; ++i) {
    const double ui = u[static_cast<size_t>(i)];
    const double r = cfg.resource.evaluate(grid.x(i) - cfg.c * t);
    out[static_cast<size_t>(i)] =
        cfg.d * (ws.conv[static_cast<size_t>(i)] - ui) + ui * (r - ui);
  }
}

void rk4_step_raw(std::vector<double>& u, double ext_l, double ext_r, double t, double dt,
                  const SimConfig& cfg, const KernelStencil& st, const Grid1D& grid,
                  Workspace& ws) {
  const size_t n = u.size();
  rhs_eval(u, ext_l, ext_r, t, cfg, st, grid, ws, ws.k1);
  ws.tmp.resize(n);
  for (size_t i = 0; i < n; ++i) ws.tmp[i] = u[i] + 0.5 * dt * ws.k1[i];
  rhs_eval(ws.tmp, ext_l, ext_r, t + 0.5 * dt, cfg, st, grid, ws, ws.k2);
  for (size_t i = 0; i < n; ++i) ws.tmp[i] = u[i] + 0.5 * dt * ws.k2[i];
  rhs_eval(ws.tmp, ext_l, ext_r, t + 0.5 * dt, cfg, st, grid, ws, ws.k3);
  for (size_t i = 0; i < n; ++i) ws.tmp[i] = u[i] + dt * ws.k3[i];
  rhs_eval(ws.tmp, ext_l, ext_r, t + dt, cfg, st, grid, ws, ws.k4);
  for (size_t i = 0; i < n; ++i)
    u[i] += dt / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
}

// Box policy: the solution lives in [0, r_plus]; floating-point dust is
// clipped, genuine overshoot is an error (it would mask instability).
void enforce_box(std::vector<double>& u, double r_plus, double dt) {
  for (double& v : u) {
    if (!std::isfinite(v))
      throw numeric_error("time step produced a non-finite value (instability)");
    if (v < -kBoxSlack || v > r_plus + kBoxSlack)
      throw numeric_error("time step overshoots [0, r_plus] beyond 1e-9; dt = " +
                          std::to_string(dt) + " is too large");
    v = std::clamp(v, 0.0, r_plus);
  }
}

void apply_semigroup_raw(std::vector<double>& psi, double ext_l, double ext_r, double dt_times_d,
                         int terms, const KernelStencil& st, Workspace& ws) {
  // e^{-z} sum_{k<=terms} z^k/k! a_k with z = d t; a_k = J * a_{k-1}
  const double z = dt_times_d;
  std::vector<double> acc(psi.size());
  std::vector<double> ak = psi;
  double coef = std::exp(-z);
  for (size_t i = 0; i < psi.size(); ++i) acc[i] = coef * ak[i];
  for (int k = 1; k <= terms; ++k) {
    convolve_raw(ak, ext_l, ext_r, st, ws.pad, ws.conv);
    ak.swap(ws.conv);
    coef *= z / k;
    for (size_t i = 0; i < psi.size(); ++i) acc[i] += coef * ak[i];
  }
  psi.swap(acc);
}

}  // namespace

double SimConfig::rho_effective() const {
  return rho > 0.0 ? rho : 2.0 * resource.r_plus - resource.r_minus + 0.1;
}

double SimConfig::dt_effective() const {
  return dt > 0.0 ? dt : 0.4 / (2.0 * d + rho_effective());
}

void SimConfig::validate(const Grid1D& grid) const {
  resource.validate();
  if (d <= 0.0) throw config_error("sim: dispersal rate d must be positive");
  if (t_end < 0.0) throw config_error("sim: t_end must be nonnegative");
  if (snapshot_stride < 1) throw config_error("sim: snapshot_stride must be >= 1");
  const double rho_eff = rho_effective();
  if (!(rho_eff > 2.0 * resource.r_plus - resource.r_minus))
    throw config_error("sim: rho must exceed 2 r_plus - r_minus");
  const double dt_eff = dt_effective();
  if (dt_eff <= 0.0) throw config_error("sim: dt must be positive");
  if (dt_eff * (2.0 * d + rho_eff) > 0.9)
    throw config_error("sim: dt (2d + rho) exceeds the stability budget 0.9");
  const double cs = c_star(kernel, d, resource.r_plus).c_star;
  const double needed = cs * t_end + 20.0 * kernel.half_width;
  if (grid.x_max - grid.x_min <= needed)
    throw config_error("sim: domain width must exceed c* t_end + 20 L = " +
                       std::to_string(needed));
}

Field nonlocal_op(const Field& u, const KernelStencil& st, double d) {
  check_spacing(u, st);
  Workspace ws;
  convolve_raw(u.values, u.ext_left, u.ext_right, st, ws.pad, ws.conv);
  Field out = u;
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = d * (ws.conv[i] - u.values[i]);
  return out;
}

Field step(const Field& u, double t, const SimConfig& cfg, const KernelStencil& st, double dt) {
  check_spacing(u, st);
  Workspace ws;
  Field out = u;
  rk4_step_raw(out.values, u.ext_left, u.ext_right, t, dt, cfg, st, u.grid, ws);
  enforce_box(out.values, cfg.resource.r_plus, dt);
  return out;
}

void integrate(const SimConfig& cfg, const Field& u0,
               const std::function<void(double, const Field&)>& on_snapshot) {
  cfg.validate(u0.grid);
  if (u0.min_value() < -kBoxSlack || u0.max_value() > cfg.resource.r_plus + kBoxSlack)
    throw config_error("integrate: initial data must lie in [0, r_plus]");
  const KernelStencil st = build_stencil(cfg.kernel, u0.grid.h);
  Field u = u0;
  Workspace ws;
  on_snapshot(0.0, u);
  if (cfg.t_end == 0.0) return;
  const int steps = std::max(1, static_cast<int>(std::ceil(cfg.t_end / cfg.dt_effective())));
  const double dt = cfg.t_end / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    rk4_step_raw(u.values, u.ext_left, u.ext_right, t, dt, cfg, st, u.grid, ws);
    enforce_box(u.values, cfg.resource.r_plus, dt);
    if ((s + 1) % cfg.snapshot_stride == 0 || s + 1 == steps) on_snapshot((s + 1) * dt, u);
  }
}

std::vector<Snapshot> integrate(const SimConfig& cfg, const Field& u0) {
  std::vector<Snapshot> out;
  integrate(cfg, u0, [&](double t, const Field& u) { out.push_back({t, u}); });
  return out;
}

Field semigroup_series(const Field& psi, double t, double d, const KernelStencil& st, int terms) {
  check_spacing(psi, st);
  if (t < 0.0) throw config_error("semigroup_series: t must be nonnegative");
  const int needed = static_cast<int>(std::ceil(3.0 * d * t)) + 20;
  if (terms < needed)
    throw config_error("semigroup_series: too few terms for the requested t, need >= " +
                       std::to_string(needed));
  Field out = psi;
  Workspace ws;
  apply_semigroup_raw(out.values, psi.ext_left, psi.ext_right, d * t, terms, st, ws);
  return out;
}

Field integrate_linear(const Field& psi, double t, double d, const KernelStencil& st, double dt) {
  check_spacing(psi, st);
  if (dt <= 0.0) throw config_error("integrate_linear: dt must be positive");
  const int steps = std::max(1, static_cast<int>(std::ceil(t / dt)));
  const double dta = t / steps;
  Field u = psi;
  Workspace ws;
  const size_t n = u.values.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto lin_rhs = [&](const std::vector<double>& v, std::vector<double>& out) {
    convolve_raw(v, psi.ext_left, psi.ext_right, st, ws.pad, ws.conv);
    for (size_t i = 0; i < n; ++i) out[i] = d * (ws.conv[i] - v[i]);
  };
  for (int s = 0; s < steps; ++s) {
    lin_rhs(u.values, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = u.values[i] + 0.5 * dta * k1[i];
    lin_rhs(tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = u.values[i] + 0.5 * dta * k2[i];
    lin_rhs(tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = u.values[i] + dta * k3[i];
    lin_rhs(tmp, k4);
    for (size_t i = 0; i < n; ++i)
      u.values[i] += dta / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return u;
}

std::vector<Field> picard_iterates(const SimConfig& cfg, const Field& u0, double t,
                                   int iterations, bool from_above, const PicardOptions& opt) {
  cfg.validate(u0.grid);
  if (t <= 0.0) throw config_error("picard: t must be positive");
  if (t > opt.t_cap)
    throw config_error("picard: t exceeds the series budget t_cap = " +
                       std::to_string(opt.t_cap));
  if (iterations < 1) throw config_error("picard: need at least one iteration");
  const double r_plus = cfg.resource.r_plus;
  if (u0.min_value() < -kBoxSlack || u0.max_value() > r_plus + kBoxSlack)
    throw config_error("picard: initial data must lie in [0, r_plus]");

  const KernelStencil st = build_stencil(cfg.kernel, u0.grid.h);
  const int m = std::max(2, opt.substeps);
  const double dt = t / m;
  const double rho = cfg.rho_effective();
  const auto ew = exp_integrator_weights(rho * dt);
  const double E = ew.decay;
  const double w0 = ew.w_left;
  const double w1 = ew.w_right;
  const int terms = static_cast<int>(std::ceil(3.0 * cfg.d * dt)) + 20;

  const int n = u0.grid.n;
  const size_t ns = static_cast<size_t>(n);
  auto g_of = [&](const std::vector<double>& u, double s, std::vector<double>& out) {
    out.resize(ns);
    for (int i = 0; i < n; ++i) {
      const double ui = u[static_cast<size_t>(i)];
      const double r = cfg.resource.evaluate(u0.grid.x(i) - cfg.c * s);
      out[static_cast<size_t>(i)] = ui * (rho + r - ui);
    }
  };

  // previous iterate's values at every time node; constants to start
  std::vector<std::vector<double>> prev(static_cast<size_t>(m + 1),
                                        std::vector<double>(ns, from_above ? r_plus : 0.0));
  std::vector<std::vector<double>> cur(static_cast<size_t>(m + 1));
  std::vector<Field> out_fields;
  out_fields.reserve(static_cast<size_t>(iterations));
  Workspace ws;
  std::vector<double> gj(ns), gj1(ns), carry(ns);

  for (int it = 0; it < iterations; ++it) {
    cur[0] = u0.values;
    for (int j = 0; j < m; ++j) {
      g_of(prev[static_cast<size_t>(j)], j * dt, gj);
      g_of(prev[static_cast<size_t>(j + 1)], (j + 1) * dt, gj1);
      // u(t_{j+1}) = P(dt)[E u(t_j) + dt w0 g_j] + dt w1 g_{j+1}
      for (size_t i = 0; i < ns; ++i)
        carry[i] = E * cur[static_cast<size_t>(j)][i] + dt * w0 * gj[i];
      const double ext_l = E * cur[static_cast<size_t>(j)].front() + dt * w0 * gj.front();
      const double ext_r = E * cur[static_cast<size_t>(j)].back() + dt * w0 * gj.back();
      apply_semigroup_raw(carry, ext_l, ext_r, cfg.d * dt, terms, st, ws);
      cur[static_cast<size_t>(j + 1)].resize(ns);
      for (size_t i = 0; i < ns; ++i)
        cur[static_cast<size_t>(j + 1)][i] = carry[i] + dt * w1 * gj1[i];
    }
    prev.swap(cur);
    Field f = u0;
    f.values = prev[static_cast<size_t>(m)];
    f.ext_left = f.values.front();
    f.ext_right = f.values.back();
    out_fields.push_back(std::move(f));
  }
  return out_fields;
}

Field picard_solve(const SimConfig& cfg, const Field& u0, double t, int iterations,
                   bool from_above, const PicardOptions& opt) {
  auto all = picard_iterates(cfg, u0, t, iterations, from_above, opt);
  return all.back();
}

std::pair<Field, Field> picard_bracket(const SimConfig& cfg, const Field& u0, double t,
                                       int max_iterations, double gap_tol,
                                       const PicardOptions& opt) {
  const auto lower = picard_iterates(cfg, u0, t, max_iterations, false, opt);
  const auto upper = picard_iterates(cfg, u0, t, max_iterations, true, opt);
  for (size_t n = 0; n < lower.size(); ++n) {
    double gap = 0.0;
    for (size_t i = 0; i < lower[n].values.size(); ++i)
      gap = std::max(gap, upper[n].values[i] - lower[n].values[i]);
    if (gap <= gap_tol) return {lower[n], upper[n]};
  }
  throw numeric_error("picard_bracket: iteration budget exceeded before the bracket closed to " +
                      std::to_string(gap_tol));
}

std::optional<double> front_position(const Field& u, double theta, FrontSide side) {
  const int n = u.grid.n;
  if (side == FrontSide::rightmost) {
    if (u.values[static_cast<size_t>(n - 1)] >= theta) return u.grid.x_max;
    for (int i = n - 2; i >= 0; --i) {
      const double a = u.values[static_cast<size_t>(i)];
      const double b = u.values[static_cast<size_t>(i + 1)];
      if (a >= theta && b < theta) return u.grid.x(i) + u.grid.h * (a - theta) / (a - b);
    }
    return std::nullopt;
  }
  if (u.values[0] >= theta) return u.grid.x_min;
  for (int i = 1; i < n; ++i) {
    const double a = u.values[static_cast<size_t>(i - 1)];
    const double b = u.values[static_cast<size_t>(i)];
    if (b >= theta && a < theta) return u.grid.x(i) - u.grid.h * (b - theta) / (b - a);
  }
  return std::nullopt;
}

FrontFit front_speed(const FrontTrace& trace, double window) {
  if (!(window > 0.0 && window <= 1.0))
    throw config_error("front_speed: window must lie in (0, 1]");
  if (trace.times.size() != trace.positions.size() || trace.times.size() < 2)
    throw config_error("front_speed: malformed trace");
  const double t0 = trace.times.front();
  const double t1 = trace.times.back();
  const double cut = t1 - window * (t1 - t0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int m = 0;
  for (size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] < cut) continue;
    const double p = trace.positions[i];
    if (std::isnan(p)) throw numeric_error("front_speed: front lost inside the fit window");
    sx += trace.times[i];
    sy += p;
    sxx += trace.times[i] * trace.times[i];
    sxy += trace.times[i] * p;
    syy += p * p;
    ++m;
  }
  if (m < 10) throw numeric_error("front_speed: fewer than 10 samples in the fit window");
  const double det = m * sxx - sx * sx;
  FrontFit fit;
  fit.samples = m;
  fit.slope = (m * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / m;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sy / m;
  for (size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] < cut) continue;
    const double pred = fit.slope * trace.times[i] + fit.intercept;
    ss_res += (trace.positions[i] - pred) * (trace.positions[i] - pred);
    ss_tot += (trace.positions[i] - mean) * (trace.positions[i] - mean);
  }
  fit.r2 = ss_tot < 1e-30 ? (ss_res < 1e-30 ? 1.0 : 0.0) : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace nlshift
