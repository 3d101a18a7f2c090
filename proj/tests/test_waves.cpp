#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlshift/dispersion.hpp"
#include "nlshift/errors.hpp"
#include "nlshift/waves.hpp"

using namespace nlshift;

namespace {

const KernelSpec kUniform{KernelFamily::uniform, 1.0};
const ResourceProfile kRes;  // tanh, -1/1, center 0, steepness 1

// trimmed budget so the unit suite stays quick; the acceptance suite reruns
// everything at the production window
IgnitionBudget coarse_budget() {
  IgnitionBudget b;
  b.t_end = 60.0;
  b.x_min = -30.0;
  b.x_max = 90.0;
  return b;
}

const IgnitionWave& shared_ignition() {
  static const IgnitionWave wave = ignition_wave(kUniform, 1.0, 1.0, 0.05, coarse_budget());
  return wave;
}

Grid1D wave_grid() { return Grid1D::make(-30.0, 30.0, 0.05); }

double defect47(const Field& Vl, double xi0, const WaveContext& ctx) {
  // d (J*V - V) - c V' + V (r(-xi) - V), worst value away from the kink
  const auto conv = nonlocal_op(Vl, ctx.stencil, ctx.d);
  double worst = 1e300;
  const double L = ctx.kernel.half_width;
  for (int i = 1; i + 1 < ctx.grid.n; ++i) {
    const double x = ctx.grid.x(i);
    if (std::abs(x - xi0) <= ctx.grid.h + 1e-12) continue;
    if (x < ctx.grid.x_min + L || x > ctx.grid.x_max - L) continue;
    const size_t k = static_cast<size_t>(i);
    const double vp = (Vl.values[k + 1] - Vl.values[k - 1]) / (2.0 * ctx.grid.h);
    const double v = Vl.values[k];
    worst = std::min(worst, conv.values[k] - ctx.c * vp +
                                v * (ctx.resource.evaluate(-x) - v));
  }
  return worst;
}

double defect40(const Field& Vb, double xi1, const WaveContext& ctx) {
  const auto conv = nonlocal_op(Vb, ctx.stencil, ctx.d);
  double worst = -1e300;
  const double L = ctx.kernel.half_width;
  for (int i = 1; i + 1 < ctx.grid.n; ++i) {
    const double x = ctx.grid.x(i);
    if (std::abs(x - xi1) <= ctx.grid.h + 1e-12) continue;
    if (x < ctx.grid.x_min + L || x > ctx.grid.x_max - L) continue;
    const size_t k = static_cast<size_t>(i);
    const double vp = (Vb.values[k + 1] - Vb.values[k - 1]) / (2.0 * ctx.grid.h);
    const double v = Vb.values[k];
    worst = std::max(worst, conv.values[k] - ctx.c * vp +
                                v * (ctx.resource.evaluate(-x) - v));
  }
  return worst;
}

}  // namespace

TEST_CASE("ignition_wave: decreasing profile with the certified limits") {
  const IgnitionWave& w = shared_ignition();
  CHECK(w.speed > 0.0);
  CHECK(w.fit_r2 > 0.999);
  CHECK(w.residual_sup <= 1e-3);
  // both speed estimates agree: slope fit vs flux integral
  CHECK(std::abs(w.speed - w.speed_integral) <= 2e-3);
  const Field& V = w.profile;
  for (size_t i = 1; i < V.values.size(); ++i) CHECK(V.values[i] <= V.values[i - 1] + 1e-9);
  CHECK(std::abs(V.values.front() - (1.0 - 0.05)) <= 1e-6);
  CHECK(std::abs(V.values.back() - (-0.05)) <= 1e-6);
  // the recentered profile crosses its mid level at xi = 0
  CHECK(std::abs(V.interpolate(0.0) - (0.5 - 0.05)) <= 1e-3);
  CHECK_THROWS_AS(ignition_wave(kUniform, 1.0, 1.0, 0.5, coarse_budget()), config_error);
  CHECK_THROWS_AS(ignition_wave(kUniform, 1.0, 1.0, 0.0, coarse_budget()), config_error);
}

TEST_CASE("ignition_wave: speed ladder is monotone and bounded by c*") {
  const double cs = c_star(kUniform, 1.0, 1.0).c_star;
  double prev = -1.0;
  for (double eps : {0.15, 0.10, 0.05}) {
    const IgnitionWave w = ignition_wave(kUniform, 1.0, 1.0, eps, coarse_budget());
    CHECK(w.speed <= cs + 1e-3);
    CHECK(w.speed >= prev - 1e-3);  // c_eps nonincreasing in eps
    prev = w.speed;
  }
}

TEST_CASE("subsolution_profile: support, left level and the defect certificate") {
  const Grid1D g = wave_grid();
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 0.45, kRes, g);
  const SubsolutionProfile sub = subsolution_profile(shared_ignition(), kRes, g);

  CHECK(sub.xi0 < 0.0);
  for (int i = 0; i < g.n; ++i) {
    const size_t k = static_cast<size_t>(i);
    CHECK(sub.field.values[k] >= 0.0);
    if (g.x(i) > sub.xi0 + 1e-9) CHECK(sub.field.values[k] == 0.0);
  }
  CHECK(std::abs(sub.field.values.front() - (1.0 - 0.05)) <= 1e-5);
  // r(-xi0) >= r_inf - eps with margin
  CHECK(kRes.evaluate(-sub.xi0) >= 1.0 - 0.05);
  CHECK(defect47(sub.field, sub.xi0, ctx) >= -1e-3);

  const Grid1D narrow = Grid1D::make(-1.0, 1.0, 0.05);
  CHECK_THROWS_AS(subsolution_profile(shared_ignition(), kRes, narrow), config_error);
}

TEST_CASE("supersolution_profile: plateau, exponential tail, defect certificate") {
  const Grid1D g = wave_grid();
  for (double c : {0.25, 1.0, 1.8}) {
    const WaveContext ctx = make_wave_context(kUniform, 1.0, c, kRes, g);
    const SupersolutionProfile sup = supersolution_profile(kUniform, 1.0, c, kRes, g);
    CHECK(kRes.evaluate(-sup.xi1) < 0.0);
    CHECK(sup.mu1 > 0.0);
    for (int i = 0; i < g.n; ++i) {
      const size_t k = static_cast<size_t>(i);
      if (g.x(i) <= sup.xi1)
        CHECK(sup.field.values[k] == 1.0);
      else
        CHECK(sup.field.values[k] ==
              doctest::Approx(std::exp(-sup.mu1 * (g.x(i) - sup.xi1))).epsilon(1e-12));
    }
    CHECK(defect40(sup.field, sup.xi1, ctx) <= 1e-3);

    const SubsolutionProfile sub = subsolution_profile(shared_ignition(), kRes, g);
    for (size_t i = 0; i < sup.field.values.size(); ++i)
      CHECK(sup.field.values[i] >= sub.field.values[i] - 1e-12);
  }
  const Grid1D narrow = Grid1D::make(-0.5, 0.5, 0.05);
  CHECK_THROWS_AS(supersolution_profile(kUniform, 1.0, 0.45, kRes, narrow), config_error);
}

TEST_CASE("H_operator: fixed points, bounds, order preservation") {
  const Grid1D g = wave_grid();
  const KernelStencil st = build_stencil(kUniform, g.h);
  const double beta = 1.0 + 2.0 * 1.0 - (-1.0);

  Field zero(g, 0.0, 0.0, 0.0);
  const Field hz = H_operator(zero, kRes, st, 1.0, beta);
  for (double v : hz.values) CHECK(v == 0.0);

  Field cap(g, 1.0, 1.0, 1.0);
  const Field hc = H_operator(cap, kRes, st, 1.0, beta);
  const double bound = (beta + 2.0 + 1.0 + 1.0) * 1.0;
  for (int i = 0; i < g.n; ++i) {
    const double expect = beta + (kRes.evaluate(-g.x(i)) - 1.0);  // dispersal term vanishes
    CHECK(hc.values[static_cast<size_t>(i)] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(hc.values[static_cast<size_t>(i)] <= beta + 1e-12);
    CHECK(std::abs(hc.values[static_cast<size_t>(i)]) <= bound);
  }

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Field a(g, 0.0, 0.5, 0.0), b(g, 0.0, 0.5, 0.0);
  for (int i = 0; i < g.n; ++i) {
    const double lo = 0.5 * unit(rng), hi = lo + (1.0 - lo) * unit(rng);
    a.values[static_cast<size_t>(i)] = hi;
    b.values[static_cast<size_t>(i)] = lo;
  }
  const Field ha = H_operator(a, kRes, st, 1.0, beta);
  const Field hb = H_operator(b, kRes, st, 1.0, beta);
  for (size_t i = 0; i < ha.values.size(); ++i) CHECK(ha.values[i] >= hb.values[i] - 1e-12);

  Field out(g, 2.0, 2.0, 2.0);
  CHECK_THROWS_AS(H_operator(out, kRes, st, 1.0, beta), config_error);
}

TEST_CASE("F_operator: constant fixed point away from the inflow boundary") {
  const Grid1D g = wave_grid();
  ResourceProfile flat;  // r == r_plus on the grid
  flat.center = -1e7;
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 0.45, flat, g);
  const double kappa = 0.35;
  Field v(g, kappa, kappa, kappa);
  const Field fv = F_operator(v, ctx);
  const double expect = (ctx.beta * kappa + kappa * (1.0 - kappa)) / ctx.beta;
  for (int i = 0; i < g.n; ++i)
    if (g.x(i) > g.x_min + 15.0)
      CHECK(fv.values[static_cast<size_t>(i)] == doctest::Approx(expect).epsilon(1e-10));
  // and the carrying capacity is exactly fixed everywhere, tail included
  Field cap(g, 1.0, 1.0, 1.0);
  const Field fc = F_operator(cap, ctx);
  for (double w : fc.values) CHECK(w == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("F_operator: sandwich inequalities at the stored profiles") {
  const Grid1D g = wave_grid();
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 0.45, kRes, g);
  const SubsolutionProfile sub = subsolution_profile(shared_ignition(), kRes, g);
  const SupersolutionProfile sup = supersolution_profile(kUniform, 1.0, 0.45, kRes, g);

  const Field f_lo = F_operator(sub.field, ctx);
  const Field f_hi = F_operator(sup.field, ctx);
  for (size_t i = 0; i < f_lo.values.size(); ++i) {
    CHECK(f_lo.values[i] >= sub.field.values[i] - 1e-9);   // F(sub) >= sub
    CHECK(f_hi.values[i] <= sup.field.values[i] + 1e-12);  // F(super) <= super
  }
}

TEST_CASE("F_operator: random profile-set properties (monotone, invariant, shape)") {
  const Grid1D g = wave_grid();
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 0.45, kRes, g);
  const SubsolutionProfile sub = subsolution_profile(shared_ignition(), kRes, g);
  const SupersolutionProfile sup = supersolution_profile(kUniform, 1.0, 0.45, kRes, g);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_member = [&]() {  // arbitrary, possibly jagged element of Theta
    Field f(g, 0.0, 1.0, 0.0);
    for (int i = 0; i < g.n; ++i) {
      const size_t k = static_cast<size_t>(i);
      const double t = unit(rng);
      f.values[k] = sub.field.values[k] + t * (sup.field.values[k] - sub.field.values[k]);
    }
    return f;
  };

  for (int trial = 0; trial < 20; ++trial) {
    Field v1 = random_member();
    Field v2 = random_member();
    for (int i = 0; i < g.n; ++i) {
      const size_t k = static_cast<size_t>(i);
      if (v1.values[k] < v2.values[k]) std::swap(v1.values[k], v2.values[k]);
    }
    const Field f1 = F_operator(v1, ctx);
    const Field f2 = F_operator(v2, ctx);
    for (size_t i = 0; i < f1.values.size(); ++i) {
      CHECK(f1.values[i] >= f2.values[i] - 1e-12);  // order preserved
      CHECK(f1.values[i] >= sub.field.values[i] - 1e-6);  // Theta preserved
      CHECK(f1.values[i] <= sup.field.values[i] + 1e-6);
    }
  }

  // nonincreasing inputs yield nonincreasing outputs
  for (int trial = 0; trial < 10; ++trial) {
    const double t = unit(rng);
    Field v(g, 0.0, 1.0, 0.0);
    for (int i = 0; i < g.n; ++i) {
      const size_t k = static_cast<size_t>(i);
      v.values[k] = sub.field.values[k] + t * (sup.field.values[k] - sub.field.values[k]);
    }
    const Field fv = F_operator(v, ctx);
    for (size_t i = 1; i < fv.values.size(); ++i)
      CHECK(fv.values[i] <= fv.values[i - 1] + 1e-12);
  }
}

TEST_CASE("iterate_wave: converged profile with every certificate") {
  const Grid1D g = wave_grid();
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 0.45, kRes, g);
  const SubsolutionProfile sub = subsolution_profile(shared_ignition(), kRes, g);
  const WaveProfile prof = iterate_wave(ctx, sub, 1e-8, 10000);

  CHECK(prof.iterations < 10000);
  CHECK(prof.worst_monotone_n >= -1e-9);   // V_{n+1} <= V_n
  CHECK(prof.worst_monotone_xi <= 1e-9);   // nonincreasing in xi
  CHECK(prof.worst_above_sub >= -1e-6);    // sandwich
  CHECK(prof.worst_below_super >= -1e-9);
  CHECK(prof.fixpoint_gap <= 10.0 * 1e-8);
  CHECK(std::abs(prof.left_value - 1.0) <= 0.01);
  CHECK(prof.right_value <= 1e-3);
  for (size_t i = 0; i < prof.V.size(); ++i) {
    CHECK(prof.V[i] >= sub.field.values[i] - 1e-9);
    CHECK(prof.V[i] <= 1.0 + 1e-12);
    CHECK(prof.V[i] >= 0.0);
  }
  // coarse-grid residual: h = 0.05 sits at the O(h^2) level
  CHECK(prof.residual_sup <= 4e-3);

  CHECK_THROWS_AS(iterate_wave(ctx, sub, 1e-8, 3), numeric_error);
}

TEST_CASE("iterate_wave: residual drops ~4x when h is halved") {
  const Grid1D g1 = Grid1D::make(-30.0, 30.0, 0.05);
  const Grid1D g2 = Grid1D::make(-30.0, 30.0, 0.025);
  const WaveContext c1 = make_wave_context(kUniform, 1.0, 0.45, kRes, g1);
  const WaveContext c2 = make_wave_context(kUniform, 1.0, 0.45, kRes, g2);
  const WaveProfile p1 = iterate_wave(c1, subsolution_profile(shared_ignition(), kRes, g1),
                                      1e-8, 10000);
  const WaveProfile p2 = iterate_wave(c2, subsolution_profile(shared_ignition(), kRes, g2),
                                      1e-8, 10000);
  const double ratio = p1.residual_sup / p2.residual_sup;
  CHECK(ratio > 2.0);
  CHECK(ratio < 8.0);
}

TEST_CASE("iterate_wave: reflection consistency and strict monotonicity of U") {
  const Grid1D g = wave_grid();
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 0.45, kRes, g);
  const SubsolutionProfile sub = subsolution_profile(shared_ignition(), kRes, g);
  const WaveProfile prof = iterate_wave(ctx, sub, 1e-8, 10000);

  // U(xi) = V(-xi): on the symmetric grid the reflected defect of the
  // original equation equals the V-defect up to roundoff
  const Field V = prof.as_field(1.0);
  const auto conv = nonlocal_op(V, ctx.stencil, ctx.d);
  double res_u = 0.0;
  const double L = ctx.kernel.half_width;
  for (int i = 1; i + 1 < g.n; ++i) {
    const double xi = g.x(i);
    if (xi < g.x_min + 2.0 * L || xi > g.x_max - 2.0 * L) continue;
    // defect of -c U' = d (J*U - U) + U (r(xi) - U) evaluated through V
    const int j = g.n - 1 - i;  // reflected index
    const size_t k = static_cast<size_t>(j);
    const double up = (V.values[k - 1] - V.values[k + 1]) / (2.0 * g.h);  // U' at xi
    const double u = V.values[k];
    const double defect =
        ctx.c * up + conv.values[k] + u * (kRes.evaluate(g.x(i)) - u);
    res_u = std::max(res_u, std::abs(defect));
  }
  CHECK(res_u <= prof.residual_sup + 1e-12);

  // strictly increasing resource: U gains strictly across the transition zone
  for (double xi = -3.0; xi <= 3.0; xi += 0.5) {
    const double u1 = V.interpolate(-xi);
    const double u2 = V.interpolate(-(xi + g.h));
    CHECK(u2 > u1);
  }
}

TEST_CASE("iterate_wave: existence for every tested speed") {
  const Grid1D g = wave_grid();
  const double cs = c_star(kUniform, 1.0, 1.0).c_star;
  const SubsolutionProfile sub = subsolution_profile(shared_ignition(), kRes, g);
  for (double f : {0.25, 0.5, 1.0, 2.0}) {
    const WaveContext ctx = make_wave_context(kUniform, 1.0, f * cs, kRes, g);
    const WaveProfile prof = iterate_wave(ctx, sub, 1e-8, 10000);
    CHECK(prof.worst_monotone_n >= -1e-9);
    CHECK(prof.right_value <= 1e-3);
    CHECK(std::abs(prof.left_value - 1.0) <= 0.01);
  }
}

TEST_CASE("wave_vs_simulation: the profile is a fixed shape under the dynamics") {
  const Grid1D g = wave_grid();
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 0.45, kRes, g);
  const SubsolutionProfile sub = subsolution_profile(shared_ignition(), kRes, g);
  const WaveProfile prof = iterate_wave(ctx, sub, 1e-8, 10000);
  const double d1 = wave_vs_simulation(prof, ctx, 10.0);
  CHECK(d1 <= 5e-3);
  const double d2 = wave_vs_simulation(prof, ctx, 20.0);
  CHECK(d2 <= 2.0 * d1 + 1e-3);  // at most linear growth in the horizon
}

TEST_CASE("wave_residual: identically zero profile has zero defect") {
  const Grid1D g = wave_grid();
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 0.45, kRes, g);
  WaveProfile prof;
  prof.grid = g;
  prof.c = ctx.c;
  prof.beta = ctx.beta;
  prof.V.assign(static_cast<size_t>(g.n), 0.0);
  CHECK(wave_residual(prof, ctx) == 0.0);
}

TEST_CASE("translation plumbing: an exact shift of a synthetic step scores zero") {
  // the comparison convention behind wave_vs_simulation, with the dynamics
  // replaced by a perfect translation: the discrepancy must vanish
  const Grid1D g = wave_grid();
  Field V(g, 0.0, 1.0, 0.0);
  for (int i = 0; i < g.n; ++i)
    V.values[static_cast<size_t>(i)] = g.x(i) < 1.2625 ? 1.0 : 0.0;  // step off the nodes
  const double shift = 10.0;  // exact multiple of h
  const int m = static_cast<int>(std::lround(shift / g.h));
  const Grid1D sim = Grid1D::make(-g.x_max - 20.0, -g.x_min + shift + 20.0, g.h);
  std::vector<double> u0(static_cast<size_t>(sim.n));
  for (int i = 0; i < sim.n; ++i) u0[static_cast<size_t>(i)] = V.interpolate(-sim.x(i));
  double sup = 0.0;
  for (int i = 0; i < sim.n; ++i) {
    const double moved = i >= m ? u0[static_cast<size_t>(i - m)] : u0.front();
    sup = std::max(sup, std::abs(moved - V.interpolate(-(sim.x(i) - shift))));
  }
  CHECK(sup == 0.0);
}

TEST_CASE("degenerate small-c branch applies F = H/beta") {
  const Grid1D g = wave_grid();
  const WaveContext ctx = make_wave_context(kUniform, 1.0, 1e-4, kRes, g);
  CHECK(ctx.degenerate);
  Field v(g, 0.4, 0.4, 0.0);
  const Field fv = F_operator(v, ctx);
  const Field hv = H_operator(v, kRes, ctx.stencil, 1.0, ctx.beta);
  for (size_t i = 0; i < fv.values.size(); ++i)
    CHECK(fv.values[i] == doctest::Approx(hv.values[i] / ctx.beta).epsilon(1e-15));
}
