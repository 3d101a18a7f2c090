#ifndef NLSHIFT_QUADRATURE_HPP
#define NLSHIFT_QUADRATURE_HPP

#include <cmath>

namespace nlshift {

namespace detail {

template <class F>
double simpson_recurse(const F& f, double x0, double x2, double f0, double f1, double f2,
                       double whole, double eps, int depth) {
  const double x1 = 0.5 * (x0 + x2);
  const double fl = f(0.5 * (x0 + x1));
  const double fr = f(0.5 * (x1 + x2));
  const double left = (x1 - x0) / 6.0 * (f0 + 4.0 * fl + f1);
  const double right = (x2 - x1) / 6.0 * (f1 + 4.0 * fr + f2);
  const double delta = left + right - whole;
  if (depth >= 48 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson_recurse(f, x0, x1, f0, fl, f1, left, 0.5 * eps, depth + 1) +
         simpson_recurse(f, x1, x2, f1, fr, f2, right, 0.5 * eps, depth + 1);
}

}  // namespace detail

// Adaptive composite Simpson on [a,b] to a relative tolerance. The integrands
// used here are smooth on the interval, so the classic |S2-S1| <= 15 eps
// acceptance test is reliable.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol = 1e-10) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = rel_tol * std::max(std::abs(whole), 1e-30);
  return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, eps, 0);
}

// Exact integration of e^{-z(1-s)} against a linear interpolant on a unit
// cell: int_0^1 e^{-z(1-s)} [(1-s) g0 + s g1] ds = w_left g0 + w_right g1.
// Both weights are positive, and w_left + w_right = (1 - e^{-z})/z.
struct ExpIntegratorWeights {
  double decay = 0.0;    // e^{-z}
  double w_left = 0.0;   // weight of the older endpoint
  double w_right = 0.0;  // weight of the newer endpoint
};

inline ExpIntegratorWeights exp_integrator_weights(double z) {
  ExpIntegratorWeights w;
  w.decay = std::exp(-z);
  if (z < 1e-3) {  // series forms, the closed forms cancel catastrophically
    w.w_right = 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
    w.w_left = 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0;
  } else {
    w.w_right = (z - 1.0 + w.decay) / (z * z);
    w.w_left = (1.0 - w.decay * (1.0 + z)) / (z * z);
  }
  return w;
}

}  // namespace nlshift

#endif
