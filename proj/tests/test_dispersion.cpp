#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlshift/dispersion.hpp"
#include "nlshift/errors.hpp"
#include "oracles.hpp"

using namespace nlshift;

namespace {
const KernelSpec kUniform{KernelFamily::uniform, 1.0};
}

TEST_CASE("phi: blow-up at both ends, closed form at lambda = 2") {
  CHECK(phi(kUniform, 1.0, 1.0, 1e-6) > 1e5);
  CHECK(phi(kUniform, 1.0, 1.0, 50.0) > 1e15);
  CHECK(phi(kUniform, 1.0, 1.0, 2.0) == doctest::Approx(std::sinh(2.0) / 4.0).epsilon(1e-10));
  CHECK_THROWS_AS(phi(kUniform, 1.0, 1.0, 0.0), config_error);
  CHECK_THROWS_AS(phi(kUniform, 1.0, 1.0, -1.0), config_error);
}

TEST_CASE("c_star: brute-force grid oracle and the stationarity identity") {
  const SpeedReport rep = c_star(kUniform, 1.0, 1.0);
  // oracle: minimize sinh(lambda)/lambda^2 on a grid of step 1e-5 over (0, 10]
  double best = 1e300;
  for (long k = 1; k <= 1000000; ++k) {
    const double lam = k * 1e-5;
    const double v = std::sinh(lam) / (lam * lam);
    if (v < best) best = v;
  }
  CHECK(std::abs(rep.c_star - best) <= 1e-6);
  // at the minimum, d/dlambda sinh/lambda^2 = 0  <=>  tanh(lambda) = lambda/2
  CHECK(std::tanh(rep.lambda_star) == doctest::Approx(rep.lambda_star / 2.0).epsilon(1e-8));
  // local-minimum certificate at the probe offsets
  CHECK(phi(kUniform, 1.0, 1.0, rep.lambda_star + 1e-4) >= rep.c_star - 1e-9);
  CHECK(phi(kUniform, 1.0, 1.0, rep.lambda_star - 1e-4) >= rep.c_star - 1e-9);
  CHECK(rep.c_star > 0.0);
  CHECK_THROWS_AS(c_star(kUniform, 1.0, -0.5), config_error);
  CHECK_THROWS_AS(c_star(kUniform, 1.0, 0.0), config_error);
}

TEST_CASE("c_star: joint homogeneity in (d, r) and monotonicity in r") {
  const double base = c_star(kUniform, 1.0, 1.0).c_star;
  CHECK(std::abs(c_star(kUniform, 4.0, 4.0).c_star - 4.0 * base) <= 1e-8 * 4.0);
  for (double s : {0.5, 2.0, 4.0})
    CHECK(std::abs(c_star(kUniform, s, s).c_star - s * base) <= 1e-8 * s);
  CHECK(c_star(kUniform, 1.0, 0.5).c_star < c_star(kUniform, 1.0, 1.0).c_star);
}

TEST_CASE("c_star_gamma: ordering and convergence as gamma -> 0") {
  const double cs = c_star(kUniform, 1.0, 1.0).c_star;
  const double near = c_star_gamma(kUniform, 1.0, 1.0, 0.05).c_star;
  CHECK(std::abs(near - cs) / cs < 0.01);
  CHECK(c_star_gamma(kUniform, 1.0, 1.0, 0.4).c_star < cs);
  double prev = 0.0;
  for (double g : {0.2, 0.1, 0.05}) {
    const double cg = c_star_gamma(kUniform, 1.0, 1.0, g).c_star;
    CHECK(cg < cs);
    CHECK(cg > prev);  // monotone approach from below along the ladder
    prev = cg;
  }
  CHECK_THROWS_AS(c_star_gamma(kUniform, 1.0, 1.0, 2.0), config_error);
  CHECK_THROWS_AS(c_star_gamma(kUniform, 1.0, 1.0, 0.0), config_error);
}

TEST_CASE("decay_root: bisection against phi and the asymptotic branches") {
  const SpeedReport rep = c_star(kUniform, 1.0, 1.0);
  const double root = decay_root(kUniform, 1.0, 1.0, rep.c_star + 1.0);
  CHECK(root > 0.0);
  CHECK(root < rep.lambda_star);
  CHECK(std::abs(phi(kUniform, 1.0, 1.0, root) - (rep.c_star + 1.0)) <= 1e-10);
  // roots merge at the minimum
  const double near = decay_root(kUniform, 1.0, 1.0, rep.c_star + 1e-6);
  CHECK(std::abs(near - rep.lambda_star) < 1e-2);
  // far target: phi ~ r/lambda dominates, root ~ r/(10 c*)
  const double far = decay_root(kUniform, 1.0, 1.0, 10.0 * rep.c_star);
  CHECK(std::abs(far - 1.0 / (10.0 * rep.c_star)) / (1.0 / (10.0 * rep.c_star)) < 0.2);
  CHECK_THROWS_AS(decay_root(kUniform, 1.0, 1.0, rep.c_star), config_error);
  CHECK_THROWS_AS(decay_root(kUniform, 1.0, 1.0, 0.5 * rep.c_star), config_error);
}

TEST_CASE("mu_root: grid-search oracle, monotone in c, sign preconditions") {
  const double mu = mu_root(kUniform, 1.0, 1.0, -0.5);
  CHECK(mu > 0.0);
  // oracle: scan h(mu) = sinh(mu)/mu - 1 + mu - 0.5 on a grid of step 1e-6
  double best_mu = 0.0, best = 1e300;
  for (long k = 1; k <= 3000000; ++k) {
    const double m = k * 1e-6;
    const double v = std::abs(oracles::sinhc(m) - 1.0 + m - 0.5);
    if (v < best) {
      best = v;
      best_mu = m;
    }
  }
  CHECK(std::abs(mu - best_mu) <= 2e-6);
  CHECK(mu_root(kUniform, 1.0, 2.0, -0.5) < mu);  // doubling c moves the root left
  CHECK_THROWS_AS(mu_root(kUniform, 1.0, 1.0, 0.0), config_error);
  CHECK_THROWS_AS(mu_root(kUniform, 1.0, 1.0, 0.3), config_error);
  CHECK_THROWS_AS(mu_root(kUniform, 1.0, -1.0, -0.5), config_error);
}

TEST_CASE("bump_subsolution_params: feasible bundle for the default scenario") {
  ResourceProfile res;  // tanh, -1/1
  const double cs = c_star(kUniform, 1.0, 1.0).c_star;
  const double c = 0.5 * cs;
  const double delta = 0.05 * cs;
  const BumpSubsolutionParams p = bump_subsolution_params(kUniform, 1.0, res, c, delta);
  CHECK(p.lambda1 > 0.0);
  CHECK(p.lambda1 < p.lambda2);
  CHECK(p.lambda2 < p.lambda_star_l);
  CHECK(p.a > 0.0);
  CHECK(p.a <= 2.0 * p.lambda1 * delta);
  CHECK(p.a <= res.r_plus / 10.0);
  // the two level equations hold at the stated residual
  CHECK(std::abs(phi_lambda_gamma(kUniform, 1.0, p.lambda1, p.gamma) - (c + delta)) <= 1e-9);
  CHECK(std::abs(phi_lambda_gamma(kUniform, 1.0, p.lambda2, p.gamma) -
                 (p.c_star_gamma_l - 2.0 * delta)) <= 1e-9);
  // l sits where c*(r(l)) = c*(inf) - delta
  CHECK(std::abs(c_star(kUniform, 1.0, res.evaluate(p.l)).c_star - (cs - delta)) <= 1e-9);
  CHECK(p.bump_speed == doctest::Approx(c + delta).epsilon(1e-9));
  CHECK_THROWS_AS(bump_subsolution_params(kUniform, 1.0, res, c, 0.3 * cs), config_error);
  CHECK_THROWS_AS(bump_subsolution_params(kUniform, 1.0, res, 1.5 * cs, delta), config_error);
}

TEST_CASE("weinberger bump: endpoint zeros, maximum location and value") {
  const double pi = 3.14159265358979323846;
  CHECK(weinberger_bump(1.0, 1.0, 0.0) == 0.0);
  CHECK(weinberger_bump(1.0, 1.0, pi) == 0.0);
  CHECK(weinberger_bump(1.0, 1.0, -0.3) == 0.0);
  CHECK(weinberger_argmax(1.0, 1.0) == doctest::Approx(pi / 4.0).epsilon(1e-14));
  const double peak = weinberger_bump(1.0, 1.0, pi / 4.0);
  CHECK(peak == doctest::Approx(std::exp(-pi / 4.0) * std::sin(pi / 4.0)).epsilon(1e-14));
  CHECK(peak > 0.0);
  CHECK(peak < 1.0);
  CHECK(weinberger_argmax(2.0, 1.0) < weinberger_argmax(1.0, 1.0));
}

TEST_CASE("property: convexity certificate across random draws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d_dist(0.5, 2.0);
  std::uniform_real_distribution<double> r_dist(0.3, 2.0);
  std::uniform_real_distribution<double> l_dist(0.05, 4.0);
  std::uniform_real_distribution<double> h_dist(0.05, 1.0);
  const KernelFamily fams[] = {KernelFamily::uniform, KernelFamily::triangular,
                               KernelFamily::cosine_bump};
  for (int i = 0; i < 100; ++i) {
    const KernelSpec spec{fams[i % 3], 1.0};
    const double d = d_dist(rng), rv = r_dist(rng);
    const double l1 = l_dist(rng), dl = h_dist(rng);
    const double second_diff = phi(spec, d, rv, l1) + phi(spec, d, rv, l1 + 2.0 * dl) -
                               2.0 * phi(spec, d, rv, l1 + dl);
    CHECK(second_diff > 0.0);
  }
}

TEST_CASE("property: minimizer certificate and orderings") {
  const SpeedReport rep = c_star(kUniform, 1.0, 1.0);
  CHECK(phi(kUniform, 1.0, 1.0, rep.lambda_star + 1e-3) > rep.c_star);
  CHECK(phi(kUniform, 1.0, 1.0, rep.lambda_star - 1e-3) > rep.c_star);
  for (double g : {0.1, 0.4, 0.9, 1.5})
    CHECK(c_star_gamma(kUniform, 1.0, 1.0, g).c_star < rep.c_star);
  CHECK(decay_root(kUniform, 1.0, 1.0, rep.c_star + 0.3) < rep.lambda_star);
  CHECK(mu_root(kUniform, 1.0, 0.7, -0.25) > 0.0);
}

TEST_CASE("stencil-backed dispersion matches the quadrature route at O(h^2)") {
  const KernelStencil st = build_stencil(kUniform, 0.025);
  const SpeedReport a = c_star(st, 1.0, 1.0);
  const SpeedReport b = c_star(kUniform, 1.0, 1.0);
  CHECK(std::abs(a.c_star - b.c_star) < 5e-4);
  CHECK(std::abs(a.lambda_star - b.lambda_star) < 1e-2);
}
