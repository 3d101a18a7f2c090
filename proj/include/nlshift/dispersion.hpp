#ifndef NLSHIFT_DISPERSION_HPP
#define NLSHIFT_DISPERSION_HPP

#include "nlshift/environment.hpp"
#include "nlshift/kernels.hpp"

namespace nlshift {

// Result of minimizing phi(r; lambda) = [d (M(lambda) - 1) + r]/lambda over
// lambda > 0.  c_star is the spreading speed at resource level r_value and
// lambda_star the unique minimizer.
struct SpeedReport {
  double c_star = 0.0;
  double lambda_star = 0.0;
  double objective_at_min = 0.0;
  double r_value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double tolerance_achieved = 0.0;
};

// Parameter bundle of the moving-bump sub-solution (the Weinberger-type
// construction): w(t,x) = a * bump(x - l - bump_speed t).
struct BumpSubsolutionParams {
  double l = 0.0;         // position with c*(r(l)) = c*(inf) - delta
  double r_level = 0.0;   // r(l)
  double gamma = 0.0;
  double lambda1 = 0.0;   // phi(lambda1, gamma) = c + delta
  double lambda2 = 0.0;   // phi(lambda2, gamma) = c*_gamma(l) - 2 delta
  double a = 0.0;         // bump amplitude, <= 2 lambda1 delta (and <= r_plus/10)
  double bump_speed = 0.0;       // phi(lambda1, gamma)
  double c_star_inf = 0.0;       // c*(r_plus)
  double c_star_l = 0.0;         // c*(r(l))
  double c_star_gamma_l = 0.0;   // c*_gamma(r(l))
  double lambda_star_l = 0.0;    // minimizer at level r(l)
};

// phi(r_value; lambda), the exponential-profile speed functional.
double phi(const KernelSpec& kernel, double d, double r_value, double lambda);

SpeedReport c_star(const KernelSpec& kernel, double d, double r_value);

// Perturbed speed with the cos(gamma y) factor, 0 < gamma < pi/(2L).
SpeedReport c_star_gamma(const KernelSpec& kernel, double d, double r_value, double gamma);

// Smaller positive root of phi(r_value; lambda) = c_target (needs c_target > c*).
double decay_root(const KernelSpec& kernel, double d, double r_value, double c_target);

// Positive root of h(mu) = d (M(mu) - 1) + c mu + r_neg, for c > 0, r_neg < 0.
double mu_root(const KernelSpec& kernel, double d, double c, double r_neg);

BumpSubsolutionParams bump_subsolution_params(const KernelSpec& kernel, double d, const ResourceProfile& r,
                           double c, double delta);

// Stencil-backed variants: identical machinery driven by the discrete
// transforms of a KernelStencil.  These are the dispersion relations the grid
// operators actually realize, which is what the dynamic comparison tests need.
double phi(const KernelStencil& st, double d, double r_value, double lambda);
SpeedReport c_star(const KernelStencil& st, double d, double r_value);
SpeedReport c_star_gamma(const KernelStencil& st, double d, double r_value, double gamma);
double decay_root(const KernelStencil& st, double d, double r_value, double c_target);
double mu_root(const KernelStencil& st, double d, double c, double r_neg);
BumpSubsolutionParams bump_subsolution_params(const KernelStencil& st, double d, const ResourceProfile& r,
                           double c, double delta);

// Weinberger bump e^{-lambda x} sin(gamma x) on [0, pi/gamma], zero elsewhere.
double weinberger_bump(double lambda, double gamma, double x);

// Location of the bump maximum, (1/gamma) arctan(gamma/lambda).
double weinberger_argmax(double lambda, double gamma);

}  // namespace nlshift

#endif
