// Randomized property suites behind the `selftest` subcommand: the module
// invariants at reduced scale, one pass/fail line each.

#include <cmath>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "nlshift/dispersion.hpp"
#include "nlshift/dynamics.hpp"
#include "nlshift/environment.hpp"
#include "nlshift/kernels.hpp"
#include "nlshift/scenario.hpp"
#include "nlshift/waves.hpp"

namespace nlshift {

namespace {

struct Suite {
  std::ostream& out;
  int failures = 0;
  void check(const std::string& name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  }
};

const KernelFamily kFamilies[] = {KernelFamily::uniform, KernelFamily::triangular,
                                  KernelFamily::cosine_bump};

void kernels_suite(Suite& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam_dist(-5.0, 5.0);
  bool norm_ok = true, raw_ok = true, even_ok = true, convex_ok = true, limit_ok = true;
  for (KernelFamily fam : kFamilies) {
    KernelSpec spec{fam, 1.0};
    for (double h : {0.25, 0.125, 0.05}) {
      const KernelStencil st = build_stencil(spec, h);
      double sum = 0.0;
      for (double w : st.weights) sum += w;
      norm_ok = norm_ok && sum == 1.0;
      raw_ok = raw_ok && std::abs(st.raw_sum - 1.0) <= 1e-6;
    }
    for (int i = 0; i < 50; ++i) {
      const double lam = lam_dist(rng);
      even_ok = even_ok && std::abs(mgf(spec, lam) - mgf(spec, -lam)) <= 1e-12;
    }
    for (int i = 0; i < 20; ++i) {
      double l1 = lam_dist(rng), l2 = lam_dist(rng);
      if (std::abs(l1 - l2) < 0.2) continue;
      const double t = 0.5 * (1.0 + std::uniform_real_distribution<double>(-0.9, 0.9)(rng));
      const double mid = mgf(spec, t * l1 + (1.0 - t) * l2);
      convex_ok = convex_ok && mid <= t * mgf(spec, l1) + (1.0 - t) * mgf(spec, l2) + 1e-12;
    }
    // mgf_cos -> mgf at O(gamma^2)
    const double lam = 1.3;
    double prev_ratio = 0.0;
    for (double g : {0.1, 0.05, 0.025}) {
      const double diff = mgf(spec, lam) - mgf_cos(spec, lam, g);
      const double ratio = diff / (g * g);
      limit_ok = limit_ok && diff >= 0.0 && ratio < 10.0;
      if (prev_ratio > 0.0) limit_ok = limit_ok && std::abs(ratio - prev_ratio) < 0.5 * prev_ratio + 0.1;
      prev_ratio = ratio;
    }
  }
  s.check("kernels: stencil mass is 1 after renormalization", norm_ok);
  s.check("kernels: raw stencil mass within 1e-6 of 1", raw_ok);
  s.check("kernels: mgf even in lambda (50 draws)", even_ok);
  s.check("kernels: mgf convex (20 random chords)", convex_ok);
  s.check("kernels: mgf_cos -> mgf at O(gamma^2)", limit_ok);
}

void environment_suite(Suite& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> xi_dist(-30.0, 30.0);
  bool mono_ok = true, cross_ok = true;
  for (ResourceFamily fam :
       {ResourceFamily::tanh, ResourceFamily::piecewise_linear, ResourceFamily::smoothstep}) {
    ResourceProfile r;
    r.family = fam;
    r.r_minus = -1.0;
    r.r_plus = 1.5;
    r.center = 0.7;
    r.steepness = 0.8;
    for (int i = 0; i < 10000; ++i) {
      double a = xi_dist(rng), b = xi_dist(rng);
      if (a > b) std::swap(a, b);
      mono_ok = mono_ok && r.evaluate(a) <= r.evaluate(b);
    }
    std::uniform_real_distribution<double> tgt(-0.99, 1.49);
    for (int i = 0; i < 100; ++i) {
      const double target = tgt(rng);
      cross_ok = cross_ok && std::abs(r.evaluate(level_crossing(r, target)) - target) <= 1e-9;
    }
  }
  s.check("environment: nondecreasing on 1e4 random pairs", mono_ok);
  s.check("environment: level_crossing consistency (100 targets)", cross_ok);
}

void dispersion_suite(Suite& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d_dist(0.5, 2.0);
  std::uniform_real_distribution<double> r_dist(0.3, 2.0);
  std::uniform_real_distribution<double> lam_dist(0.05, 4.0);
  bool convex_ok = true, minimizer_ok = true, ordering_ok = true, homog_ok = true;
  for (int i = 0; i < 100; ++i) {
    KernelSpec spec{kFamilies[i % 3], 1.0};
    const double d = d_dist(rng);
    const double rv = r_dist(rng);
    const double l1 = lam_dist(rng);
    const double dl = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    const double mid2 = 2.0 * phi(spec, d, rv, l1 + dl);
    convex_ok = convex_ok && phi(spec, d, rv, l1) + phi(spec, d, rv, l1 + 2 * dl) - mid2 > 0.0;
  }
  KernelSpec spec{KernelFamily::uniform, 1.0};
  const SpeedReport rep = c_star(spec, 1.0, 1.0);
  minimizer_ok = phi(spec, 1.0, 1.0, rep.lambda_star + 1e-3) > rep.c_star &&
                 phi(spec, 1.0, 1.0, rep.lambda_star - 1e-3) > rep.c_star;
  for (double g : {0.2, 0.4, 1.0})
    ordering_ok = ordering_ok && c_star_gamma(spec, 1.0, 1.0, g).c_star < rep.c_star;
  const double root = decay_root(spec, 1.0, 1.0, rep.c_star + 1.0);
  ordering_ok = ordering_ok && root < rep.lambda_star;
  ordering_ok = ordering_ok && mu_root(spec, 1.0, 1.0, -0.5) > 0.0;
  for (double scale : {0.5, 2.0, 4.0}) {
    const double lhs = c_star(spec, scale * 1.0, scale * 1.0).c_star;
    homog_ok = homog_ok && std::abs(lhs - scale * rep.c_star) <= 1e-8 * scale;
  }
  s.check("dispersion: phi second difference positive (100 draws)", convex_ok);
  s.check("dispersion: strict local minimum at lambda_star", minimizer_ok);
  s.check("dispersion: c_star_gamma < c_star, roots in range", ordering_ok);
  s.check("dispersion: degree-1 homogeneity in (d, r)", homog_ok);
}

void dynamics_suite(Suite& s, std::mt19937_64& rng) {
  SimConfig cfg;
  cfg.d = 1.0;
  cfg.kernel = {KernelFamily::uniform, 1.0};
  cfg.resource = {};  // tanh default
  cfg.c = 0.45;
  cfg.t_end = 10.0;
  cfg.snapshot_stride = 32;
  const Grid1D grid = Grid1D::make(-30.0, 30.0, 0.05);

  std::uniform_real_distribution<double> amp(0.1, 0.9);
  std::uniform_real_distribution<double> pos(-10.0, 10.0);
  auto smooth_random = [&]() {
    Field f(grid, 0.0, 0.0, 0.0);
    for (int b = 0; b < 4; ++b) {
      const double a = amp(rng), x0 = pos(rng), w = 1.0 + 3.0 * amp(rng);
      for (int i = 0; i < grid.n; ++i)
        f.values[static_cast<size_t>(i)] +=
            a * std::exp(-std::pow((grid.x(i) - x0) / w, 2));
    }
    for (double& v : f.values) v = std::min(v, 1.0);
    return f;
  };

  bool order_ok = true, box_ok = true;
  for (int pair = 0; pair < 3; ++pair) {
    Field hi = smooth_random();
    Field lo = hi;
    const double shrink = 0.2 + 0.6 * amp(rng);
    for (double& v : lo.values) v *= shrink;
    auto hi_snaps = integrate(cfg, hi);
    auto lo_snaps = integrate(cfg, lo);
    for (size_t k = 0; k < hi_snaps.size(); ++k)
      for (size_t i = 0; i < hi_snaps[k].u.values.size(); ++i) {
        order_ok = order_ok &&
                   lo_snaps[k].u.values[i] <= hi_snaps[k].u.values[i] + 1e-9;
        box_ok = box_ok && hi_snaps[k].u.values[i] >= 0.0 &&
                 hi_snaps[k].u.values[i] <= cfg.resource.r_plus + 1e-9;
      }
  }
  s.check("dynamics: comparison principle on random ordered pairs", order_ok);
  s.check("dynamics: box invariance of snapshots", box_ok);

  // linear mass conservation
  const KernelStencil st = build_stencil(cfg.kernel, grid.h);
  Field psi(grid, 0.0, 0.0, 0.0);
  for (int i = 0; i < grid.n; ++i)
    psi.values[static_cast<size_t>(i)] = std::exp(-std::pow(grid.x(i) / 2.0, 2));
  const Field evolved = semigroup_series(psi, 1.0, cfg.d, st, 40);
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    m0 += psi.values[static_cast<size_t>(i)] * grid.h;
    m1 += evolved.values[static_cast<size_t>(i)] * grid.h;
  }
  s.check("dynamics: semigroup mass conservation to 1e-8",
          std::abs(m1 - m0) <= 1e-8 * std::abs(m0));

  FrontTrace trace;
  for (int i = 0; i <= 40; ++i) {
    trace.times.push_back(i * 0.5);
    trace.positions.push_back(3.0 + 0.7 * i * 0.5);
  }
  const FrontFit fit = front_speed(trace, 0.5);
  s.check("dynamics: front_speed exact on synthetic line",
          std::abs(fit.slope - 0.7) <= 1e-12 && fit.r2 == 1.0);
}

void waves_suite(Suite& s, std::mt19937_64& rng) {
  const KernelSpec kernel{KernelFamily::uniform, 1.0};
  const ResourceProfile res;
  const Grid1D grid = Grid1D::make(-30.0, 30.0, 0.05);
  IgnitionBudget budget;
  budget.h = 0.05;
  budget.t_end = 60.0;
  budget.x_min = -30.0;
  budget.x_max = 90.0;
  const WaveContext ctx = make_wave_context(kernel, 1.0, 0.45, res, grid);
  const IgnitionWave ign = ignition_wave(kernel, 1.0, res.r_plus, 0.05, budget);
  const SubsolutionProfile sub = subsolution_profile(ign, res, grid);
  const SupersolutionProfile super = supersolution_profile(kernel, 1.0, 0.45, res, grid);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_theta = [&]() {
    // nonincreasing mixture between the stored sub- and super-solutions
    Field f = sub.field;
    f.ext_left = res.r_plus;
    f.ext_right = 0.0;
    double t = unit(rng);
    for (int i = 0; i < grid.n; ++i) {
      const size_t k = static_cast<size_t>(i);
      f.values[k] = sub.field.values[k] +
                    t * (super.field.values[k] - sub.field.values[k]);
    }
    return f;
  };

  bool mono_ok = true, theta_ok = true, shape_ok = true;
  for (int it = 0; it < 5; ++it) {
    Field v1 = random_theta();
    Field v2 = random_theta();
    for (int i = 0; i < grid.n; ++i) {
      const size_t k = static_cast<size_t>(i);
      if (v1.values[k] < v2.values[k]) std::swap(v1.values[k], v2.values[k]);
    }
    const Field f1 = F_operator(v1, ctx);
    const Field f2 = F_operator(v2, ctx);
    for (int i = 0; i < grid.n; ++i) {
      const size_t k = static_cast<size_t>(i);
      mono_ok = mono_ok && f1.values[k] >= f2.values[k] - 1e-12;
      theta_ok = theta_ok && f1.values[k] >= sub.field.values[k] - 1e-6 &&
                 f1.values[k] <= super.field.values[k] + 1e-6;
      if (i > 0) shape_ok = shape_ok && f1.values[k] <= f1.values[k - 1] + 1e-12;
    }
  }
  s.check("waves: F order preserving on random pairs", mono_ok);
  s.check("waves: F maps the profile set into itself (1e-6)", theta_ok);
  s.check("waves: F preserves nonincreasing shape", shape_ok);
}

}  // namespace

int selftest(std::uint64_t seed, std::ostream& out) {
  std::mt19937_64 rng(seed);
  Suite s{out};
  kernels_suite(s, rng);
  environment_suite(s, rng);
  dispersion_suite(s, rng);
  dynamics_suite(s, rng);
  waves_suite(s, rng);
  out << (s.failures == 0 ? "selftest: all suites passed\n"
                          : "selftest: " + std::to_string(s.failures) + " failures\n");
  return s.failures;
}

}  // namespace nlshift
