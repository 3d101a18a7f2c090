#ifndef NLSHIFT_ENVIRONMENT_HPP
#define NLSHIFT_ENVIRONMENT_HPP

#include <string_view>

namespace nlshift {

// The shifting resource r(xi): continuous, nondecreasing, with finite limits
// r(-inf) = r_minus < 0 < r_plus = r(+inf).
enum class ResourceFamily { tanh, piecewise_linear, smoothstep };

ResourceFamily resource_family_from_string(std::string_view name);
std::string_view to_string(ResourceFamily family);

struct ResourceProfile {
  ResourceFamily family = ResourceFamily::tanh;
  double r_minus = -1.0;
  double r_plus = 1.0;
  double center = 0.0;
  double steepness = 1.0;  // slope at the center is (r_plus - r_minus)/2 * steepness

  void validate() const;
  double evaluate(double xi) const;
};

// Leftmost xi with r(xi) = target, for target strictly inside (r_minus, r_plus).
double level_crossing(const ResourceProfile& r, double target);

}  // namespace nlshift

#endif
