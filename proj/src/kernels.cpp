#include "nlshift/kernels.hpp"

#include <cmath>

#include "nlshift/errors.hpp"
#include "nlshift/quadrature.hpp"

namespace nlshift {

namespace {

constexpr double kPi = 3.14159265358979323846;

// exp overflow guard: e^{|lambda| L} must stay finite
void check_exponent_range(double lambda, double half_width) {
  if (std::abs(lambda) * half_width > 700.0)
    throw numeric_error("kernel transform: |lambda|*L exceeds the exp overflow cap of 700");
}

}  // namespace

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "uniform") return KernelFamily::uniform;
  if (name == "triangular") return KernelFamily::triangular;
  if (name == "cosine-bump" || name == "cosine_bump") return KernelFamily::cosine_bump;
  throw config_error("unknown kernel family: " + std::string(name));
}

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::uniform: return "uniform";
    case KernelFamily::triangular: return "triangular";
    case KernelFamily::cosine_bump: return "cosine-bump";
  }
  return "?";
}

double KernelSpec::density(double y) const {
  const double L = half_width;
  if (L <= 0.0) throw config_error("kernel half_width must be positive");
  const double a = std::abs(y);
  if (a > L) return 0.0;
  switch (family) {
    case KernelFamily::uniform:
      return 0.5 / L;
    case KernelFamily::triangular:
      return (L - a) / (L * L);
    case KernelFamily::cosine_bump:
      return (1.0 + std::cos(kPi * a / L)) / (2.0 * L);
  }
  return 0.0;
}

KernelStencil build_stencil(const KernelSpec& spec, double h) {
  const double L = spec.half_width;
  if (h <= 0.0) throw config_error("build_stencil: spacing h must be positive");
  if (h > L) throw config_error("build_stencil: spacing h must not exceed the kernel half-width");
  const double ratio = L / h;
  const int K = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - K) > 1e-9 * ratio)
    throw config_error("build_stencil: kernel half-width must be an integer multiple of h");

  KernelStencil st;
  st.spacing = h;
  st.half_extent = K;
  st.weights.resize(static_cast<size_t>(2 * K + 1));
  for (int k = -K; k <= K; ++k) {
    double w = spec.density(k * h) * h;
    if (std::abs(k) == K) w *= 0.5;  // trapezoid end weights at +-L
    st.weights[static_cast<size_t>(k + K)] = w;
  }
  double sum = 0.0;
  for (double w : st.weights) sum += w;
  st.raw_sum = sum;
  for (double& w : st.weights) w /= sum;
  // pin the total to 1 bitwise; only the center weight is touched
  for (int pass = 0; pass < 5; ++pass) {
    double s2 = 0.0;
    for (double w : st.weights) s2 += w;
    if (s2 == 1.0) break;
    st.weights[static_cast<size_t>(K)] += 1.0 - s2;
  }
  return st;
}

double KernelStencil::mgf(double lambda) const {
  check_exponent_range(lambda, half_extent * spacing);
  const double a = std::abs(lambda);
  double acc = weight(0);
  for (int k = 1; k <= half_extent; ++k) acc += 2.0 * weight(k) * std::cosh(a * k * spacing);
  return acc;
}

double KernelStencil::mgf_cos(double lambda, double gamma) const {
  check_exponent_range(lambda, half_extent * spacing);
  const double a = std::abs(lambda);
  double acc = weight(0);
  for (int k = 1; k <= half_extent; ++k)
    acc += 2.0 * weight(k) * std::cosh(a * k * spacing) * std::cos(gamma * k * spacing);
  return acc;
}

double KernelStencil::phi_lambda_gamma(double d, double lambda, double gamma) const {
  check_exponent_range(lambda, half_extent * spacing);
  const double L = half_extent * spacing;
  if (lambda <= 0.0) throw config_error("phi_lambda_gamma: lambda must be positive");
  if (!(gamma > 0.0 && gamma < kPi / (2.0 * L)))
    throw config_error("phi_lambda_gamma: gamma must lie in (0, pi/(2L))");
  double acc = 0.0;
  for (int k = 1; k <= half_extent; ++k)
    acc += 2.0 * weight(k) * std::sinh(lambda * k * spacing) * std::sin(gamma * k * spacing);
  return d * acc / gamma;
}

double mgf(const KernelSpec& spec, double lambda) {
  const double L = spec.half_width;
  check_exponent_range(lambda, L);
  const double a = std::abs(lambda);
  // J even: int_{-L}^{L} J e^{lambda y} = int_0^L J(y) 2 cosh(lambda y) dy,
  // which makes evenness in lambda exact.
  auto f = [&](double y) { return 2.0 * spec.density(y) * std::cosh(a * y); };
  return adaptive_simpson(f, 0.0, L, 1e-10);
}

double mgf_cos(const KernelSpec& spec, double lambda, double gamma) {
  const double L = spec.half_width;
  check_exponent_range(lambda, L);
  if (gamma < 0.0) throw config_error("mgf_cos: gamma must be nonnegative");
  const double a = std::abs(lambda);
  auto f = [&](double y) { return 2.0 * spec.density(y) * std::cosh(a * y) * std::cos(gamma * y); };
  return adaptive_simpson(f, 0.0, L, 1e-10);
}

double phi_lambda_gamma(const KernelSpec& spec, double d, double lambda, double gamma) {
  const double L = spec.half_width;
  check_exponent_range(lambda, L);
  if (lambda <= 0.0) throw config_error("phi_lambda_gamma: lambda must be positive");
  if (!(gamma > 0.0 && gamma < kPi / (2.0 * L)))
    throw config_error("phi_lambda_gamma: gamma must lie in (0, pi/(2L))");
  auto f = [&](double y) {
    return 2.0 * spec.density(y) * std::sinh(lambda * y) * std::sin(gamma * y);
  };
  return d * adaptive_simpson(f, 0.0, L, 1e-10) / gamma;
}

}  // namespace nlshift
