#ifndef NLSHIFT_GRID_HPP
#define NLSHIFT_GRID_HPP

#include <cmath>
#include <vector>

#include "nlshift/errors.hpp"

namespace nlshift {

// Uniform 1-D grid, x_max - x_min = (n-1) h.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  double h = 0.0;
  int n = 0;

  static Grid1D make(double x_min, double x_max, double h) {
    if (h <= 0.0) throw config_error("grid: spacing h must be positive");
    if (x_max <= x_min) throw config_error("grid: x_max must exceed x_min");
    const double ratio = (x_max - x_min) / h;
    const int cells = static_cast<int>(std::lround(ratio));
    if (std::abs(ratio - cells) > 1e-9 * std::max(1.0, ratio))
      throw config_error("grid: domain length must be an integer multiple of h");
    Grid1D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.h = h;
    g.n = cells + 1;
    if (g.n < 16) throw config_error("grid: need at least 16 points");
    return g;
  }

  double x(int i) const { return x_min + i * h; }
};

// A scalar function sampled on a grid, with constant continuation on each
// side for out-of-domain reads.
struct Field {
  Grid1D grid;
  std::vector<double> values;
  double ext_left = 0.0;
  double ext_right = 0.0;

  Field() = default;
  Field(const Grid1D& g, double fill, double vl, double vr)
      : grid(g), values(static_cast<size_t>(g.n), fill), ext_left(vl), ext_right(vr) {}

  double at(int i) const {
    if (i < 0) return ext_left;
    if (i >= grid.n) return ext_right;
    return values[static_cast<size_t>(i)];
  }

  // linear interpolation, constant continuation outside the grid
  double interpolate(double x) const {
    if (x <= grid.x_min) return x < grid.x_min ? ext_left : values.front();
    if (x >= grid.x_max) return x > grid.x_max ? ext_right : values.back();
    const double s = (x - grid.x_min) / grid.h;
    const int i = static_cast<int>(s);
    const double t = s - i;
    return (1.0 - t) * at(i) + t * at(i + 1);
  }

  double max_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::max(m, v);
    return m;
  }
  double min_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::min(m, v);
    return m;
  }
  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace nlshift

#endif
