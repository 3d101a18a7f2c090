#include "nlshift/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlshift/errors.hpp"

namespace nlshift {

ResourceFamily resource_family_from_string(std::string_view name) {
  if (name == "tanh") return ResourceFamily::tanh;
  if (name == "piecewise-linear" || name == "piecewise_linear") return ResourceFamily::piecewise_linear;
  if (name == "smoothstep") return ResourceFamily::smoothstep;
  throw config_error("unknown resource family: " + std::string(name));
}

std::string_view to_string(ResourceFamily family) {
  switch (family) {
    case ResourceFamily::tanh: return "tanh";
    case ResourceFamily::piecewise_linear: return "piecewise-linear";
    case ResourceFamily::smoothstep: return "smoothstep";
  }
  return "?";
}

void ResourceProfile::validate() const {
  if (!(r_minus < 0.0 && 0.0 < r_plus))
    throw config_error("resource: need r_minus < 0 < r_plus");
  if (!(steepness > 0.0)) throw config_error("resource: steepness must be positive");
}

double ResourceProfile::evaluate(double xi) const {
  const double mid = 0.5 * (r_plus + r_minus);
  const double amp = 0.5 * (r_plus - r_minus);
  const double s = steepness * (xi - center);
  switch (family) {
    case ResourceFamily::tanh:
      return mid + amp * std::tanh(s);
    case ResourceFamily::piecewise_linear:
      // linear ramp with the same center slope as the tanh family
      return std::clamp(mid + amp * s, r_minus, r_plus);
    case ResourceFamily::smoothstep: {
      // cubic 3t^2 - 2t^3 over a ramp of half-width 1.5/steepness, again
      // matching the center slope amp*steepness
      const double t = std::clamp((s + 1.5) / 3.0, 0.0, 1.0);
      return r_minus + (r_plus - r_minus) * t * t * (3.0 - 2.0 * t);
    }
  }
  return mid;
}

double level_crossing(const ResourceProfile& r, double target) {
  r.validate();
  if (!(target > r.r_minus && target < r.r_plus))
    throw config_error("level_crossing: target must lie strictly inside (r_minus, r_plus)");

  // expand a bracket around the transition, then bisect on r(xi) >= target,
  // which converges to the leftmost crossing for merely nondecreasing families
  double span = 3.0 / r.steepness;
  double lo = r.center - span;
  double hi = r.center + span;
  for (int i = 0; i < 200 && r.evaluate(lo) >= target; ++i) lo -= span;
  for (int i = 0; i < 200 && r.evaluate(hi) < target; ++i) hi += span;
  if (r.evaluate(lo) >= target || r.evaluate(hi) < target)
    throw numeric_error("level_crossing: failed to bracket the target level");

  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (r.evaluate(mid) >= target)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(hi))) break;
  }
  return hi;
}

}  // namespace nlshift
