#ifndef NLSHIFT_ROOTFIND_HPP
#define NLSHIFT_ROOTFIND_HPP

#include <cmath>
#include <utility>

#include "nlshift/errors.hpp"

namespace nlshift {

// Bisection for a sign change of f on [lo, hi]. Stops once the residual at
// the midpoint drops below res_tol or the bracket is exhausted in doubles.
template <class F>
double bisect(const F& f, double lo, double hi, double res_tol = 1e-10, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw numeric_error("bisect: no sign change on the initial bracket");
  double mid = lo, fmid = flo;
  for (int i = 0; i < max_iter; ++i) {
    mid = 0.5 * (lo + hi);
    fmid = f(mid);
    if (std::abs(fmid) <= res_tol) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * (std::abs(lo) + std::abs(hi))) break;
  }
  return mid;
}

// Golden-section minimization of a unimodal f on [a,b] down to |b-a| <= x_tol.
// Returns (argmin, f(argmin)).
template <class F>
std::pair<double, double> golden_minimize(const F& f, double a, double b, double x_tol = 1e-10) {
  static const double inv_phi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

}  // namespace nlshift

#endif
