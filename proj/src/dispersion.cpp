// Speed machinery: the functional phi(r; lambda), its minimum c*(r) and
// minimizer lambda*(r), the gamma-perturbed variants, the exponential decay
// roots used by the super-solutions, and the sub-solution parameter bundle.
//
// Everything is written once against a small "transforms" interface and
// instantiated twice: with the quadrature transforms of an analytic kernel
// and with the discrete transforms of a sampled stencil.

#include "nlshift/dispersion.hpp"

#include <cmath>
#include <string>

#include "nlshift/errors.hpp"
#include "nlshift/rootfind.hpp"

namespace nlshift {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SpecTransforms {
  const KernelSpec& spec;
  double half_width() const { return spec.half_width; }
  double mgf(double lambda) const { return nlshift::mgf(spec, lambda); }
  double mgf_cos(double lambda, double gamma) const { return nlshift::mgf_cos(spec, lambda, gamma); }
  double phi_lg(double d, double lambda, double gamma) const {
    return nlshift::phi_lambda_gamma(spec, d, lambda, gamma);
  }
};

struct StencilTransforms {
  const KernelStencil& st;
  double half_width() const { return st.half_extent * st.spacing; }
  double mgf(double lambda) const { return st.mgf(lambda); }
  double mgf_cos(double lambda, double gamma) const { return st.mgf_cos(lambda, gamma); }
  double phi_lg(double d, double lambda, double gamma) const {
    return st.phi_lambda_gamma(d, lambda, gamma);
  }
};

template <class TR>
double phi_impl(const TR& tr, double d, double r_value, double lambda) {
  if (lambda <= 0.0) throw config_error("phi: lambda must be positive");
  return (d * (tr.mgf(lambda) - 1.0) + r_value) / lambda;
}

// Minimize a unimodal positive-coercive objective over lambda > 0 by
// doubling/halving a bracket away from lambda = 1, then golden section.
template <class Objective>
SpeedReport minimize_over_lambda(const Objective& f, double lambda_cap, double r_value) {
  double lo = 1.0;
  while (lo > 1e-12 && f(0.5 * lo) < f(lo)) lo *= 0.5;
  double hi = 1.0;
  while (f(2.0 * hi) < f(hi)) {
    hi *= 2.0;
    if (2.0 * hi > lambda_cap)
      throw numeric_error("speed minimization: bracket exceeds the exp overflow cap 700/L");
  }
  auto [lam, val] = golden_minimize(f, 0.5 * lo, 2.0 * hi, 1e-10);
  SpeedReport rep;
  rep.c_star = val;
  rep.lambda_star = lam;
  rep.objective_at_min = val;
  rep.r_value = r_value;
  rep.bracket_lo = 0.5 * lo;
  rep.bracket_hi = 2.0 * hi;
  rep.tolerance_achieved = 1e-10;
  return rep;
}

template <class TR>
SpeedReport c_star_impl(const TR& tr, double d, double r_value) {
  if (d <= 0.0) throw config_error("c_star: dispersal rate d must be positive");
  if (r_value <= 0.0)
    throw config_error("c_star: no positive speed defined, resource level must be positive");
  const double cap = 700.0 / tr.half_width();
  auto f = [&](double lam) { return (d * (tr.mgf(lam) - 1.0) + r_value) / lam; };
  return minimize_over_lambda(f, cap, r_value);
}

template <class TR>
SpeedReport c_star_gamma_impl(const TR& tr, double d, double r_value, double gamma) {
  if (d <= 0.0) throw config_error("c_star_gamma: dispersal rate d must be positive");
  if (r_value <= 0.0) throw config_error("c_star_gamma: resource level must be positive");
  const double L = tr.half_width();
  if (!(gamma > 0.0 && gamma < kPi / (2.0 * L)))
    throw config_error("c_star_gamma: gamma must lie in (0, pi/(2L))");
  // positive coercivity as lambda -> 0 needs r > d (1 - C(0, gamma))
  if (d * (tr.mgf_cos(0.0, gamma) - 1.0) + r_value <= 0.0)
    throw config_error("c_star_gamma: gamma too large for this resource level");
  const double cap = 700.0 / L;
  auto f = [&](double lam) { return (d * (tr.mgf_cos(lam, gamma) - 1.0) + r_value) / lam; };
  return minimize_over_lambda(f, cap, r_value);
}

template <class TR>
double decay_root_impl(const TR& tr, double d, double r_value, double c_target) {
  const SpeedReport rep = c_star_impl(tr, d, r_value);
  if (!(c_target > rep.c_star))
    throw config_error("decay_root: c_target must exceed c_star (no simple root otherwise)");
  auto g = [&](double lam) { return (d * (tr.mgf(lam) - 1.0) + r_value) / lam - c_target; };
  // g < 0 at lambda*, g -> +inf as lambda -> 0+
  double lo = rep.lambda_star;
  while (g(lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) throw numeric_error("decay_root: failed to bracket the small-lambda branch");
  }
  return bisect(g, lo, rep.lambda_star, 1e-10, 300);
}

template <class TR>
double mu_root_impl(const TR& tr, double d, double c, double r_neg) {
  if (c <= 0.0) throw config_error("mu_root: speed c must be positive");
  if (r_neg >= 0.0) throw config_error("mu_root: r_neg must be negative");
  auto h = [&](double mu) { return d * (tr.mgf(mu) - 1.0) + c * mu + r_neg; };
  const double cap = 700.0 / tr.half_width();
  double hi = 1.0;
  while (h(hi) < 0.0) {
    hi *= 2.0;
    if (hi > cap) throw numeric_error("mu_root: bracket exceeds the exp overflow cap 700/L");
  }
  // h(0) = r_neg < 0, h convex, h'(0) = c > 0: unique positive root
  return bisect(h, 0.0, hi, 1e-10, 300);
}

template <class TR>
BumpSubsolutionParams bump_subsolution_params_impl(const TR& tr, double d, const ResourceProfile& r, double c,
                                double delta) {
  r.validate();
  const SpeedReport inf_rep = c_star_impl(tr, d, r.r_plus);
  if (!(c > 0.0 && c < inf_rep.c_star))
    throw config_error("bump_subsolution_params: need 0 < c < c_star(r_plus)");
  if (!(delta > 0.0 && delta < (inf_rep.c_star - c) / 5.0))
    throw config_error("bump_subsolution_params: need 0 < delta < (c_star(r_plus) - c)/5");

  // resource level with c*(level) = c*(inf) - delta; c* is increasing in r
  const double target_speed = inf_rep.c_star - delta;
  double r_lo = r.r_plus;
  while (c_star_impl(tr, d, r_lo).c_star >= target_speed) r_lo *= 0.5;
  const double r_level = bisect(
      [&](double rv) { return c_star_impl(tr, d, rv).c_star - target_speed; }, r_lo, r.r_plus,
      1e-12, 200);
  const SpeedReport l_rep = c_star_impl(tr, d, r_level);

  BumpSubsolutionParams out;
  out.l = level_crossing(r, r_level);
  out.r_level = r_level;
  out.c_star_inf = inf_rep.c_star;
  out.c_star_l = l_rep.c_star;
  out.lambda_star_l = l_rep.lambda_star;

  // largest gamma in a fixed descending ladder with c*(l) - c*_gamma(l) <= delta
  const double gamma_max = kPi / (2.0 * tr.half_width());
  double gamma = 0.0;
  SpeedReport g_rep;
  for (double g = 0.2; g >= 1e-4; g *= 0.5) {
    if (g >= gamma_max) continue;
    g_rep = c_star_gamma_impl(tr, d, r_level, g);
    if (l_rep.c_star - g_rep.c_star <= delta) {
      gamma = g;
      break;
    }
  }
  if (gamma == 0.0)
    throw numeric_error("bump_subsolution_params: no gamma in the ladder satisfies the closeness condition");
  out.gamma = gamma;
  out.c_star_gamma_l = g_rep.c_star;

  // phi(lambda, gamma) is increasing in lambda; solve the two level equations
  const double cap = 700.0 / tr.half_width();
  auto solve_philg = [&](double value) {
    auto g = [&](double lam) { return tr.phi_lg(d, lam, gamma) - value; };
    double hi = 1.0;
    while (g(hi) < 0.0) {
      hi *= 2.0;
      if (hi > cap) throw numeric_error("bump_subsolution_params: lambda bracket exceeds the overflow cap");
    }
    double lo = hi;
    while (lo > 1e-300 && g(lo) > 0.0) lo *= 0.5;
    return bisect(g, lo, hi, 1e-9, 300);
  };
  out.lambda1 = solve_philg(c + delta);
  out.lambda2 = solve_philg(g_rep.c_star - 2.0 * delta);
  out.bump_speed = tr.phi_lg(d, out.lambda1, gamma);
  if (!(0.0 < out.lambda1 && out.lambda1 < out.lambda2 && out.lambda2 < out.lambda_star_l))
    throw numeric_error("bump_subsolution_params: ordering lambda1 < lambda2 < lambda*(l) failed");

  out.a = std::min(2.0 * out.lambda1 * delta, r.r_plus / 10.0);
  return out;
}

}  // namespace

double phi(const KernelSpec& kernel, double d, double r_value, double lambda) {
  return phi_impl(SpecTransforms{kernel}, d, r_value, lambda);
}
SpeedReport c_star(const KernelSpec& kernel, double d, double r_value) {
  return c_star_impl(SpecTransforms{kernel}, d, r_value);
}
SpeedReport c_star_gamma(const KernelSpec& kernel, double d, double r_value, double gamma) {
  return c_star_gamma_impl(SpecTransforms{kernel}, d, r_value, gamma);
}
double decay_root(const KernelSpec& kernel, double d, double r_value, double c_target) {
  return decay_root_impl(SpecTransforms{kernel}, d, r_value, c_target);
}
double mu_root(const KernelSpec& kernel, double d, double c, double r_neg) {
  return mu_root_impl(SpecTransforms{kernel}, d, c, r_neg);
}
BumpSubsolutionParams bump_subsolution_params(const KernelSpec& kernel, double d, const ResourceProfile& r, double c,
                           double delta) {
  return bump_subsolution_params_impl(SpecTransforms{kernel}, d, r, c, delta);
}

double phi(const KernelStencil& st, double d, double r_value, double lambda) {
  return phi_impl(StencilTransforms{st}, d, r_value, lambda);
}
SpeedReport c_star(const KernelStencil& st, double d, double r_value) {
  return c_star_impl(StencilTransforms{st}, d, r_value);
}
SpeedReport c_star_gamma(const KernelStencil& st, double d, double r_value, double gamma) {
  return c_star_gamma_impl(StencilTransforms{st}, d, r_value, gamma);
}
double decay_root(const KernelStencil& st, double d, double r_value, double c_target) {
  return decay_root_impl(StencilTransforms{st}, d, r_value, c_target);
}
double mu_root(const KernelStencil& st, double d, double c, double r_neg) {
  return mu_root_impl(StencilTransforms{st}, d, c, r_neg);
}
BumpSubsolutionParams bump_subsolution_params(const KernelStencil& st, double d, const ResourceProfile& r, double c,
                           double delta) {
  return bump_subsolution_params_impl(StencilTransforms{st}, d, r, c, delta);
}

double weinberger_bump(double lambda, double gamma, double x) {
  if (lambda <= 0.0 || gamma <= 0.0)
    throw config_error("weinberger_bump: lambda and gamma must be positive");
  if (x <= 0.0 || x >= kPi / gamma) return 0.0;
  return std::exp(-lambda * x) * std::sin(gamma * x);
}

double weinberger_argmax(double lambda, double gamma) {
  if (lambda <= 0.0 || gamma <= 0.0)
    throw config_error("weinberger_argmax: lambda and gamma must be positive");
  return std::atan(gamma / lambda) / gamma;
}

}  // namespace nlshift
