#ifndef NLSHIFT_KERNELS_HPP
#define NLSHIFT_KERNELS_HPP

#include <string>
#include <string_view>
#include <vector>

namespace nlshift {

// Dispersal kernels J: even, compactly supported on [-L, L], unit mass.
// Three analytic families so that closed-form oracles exist.
enum class KernelFamily { uniform, triangular, cosine_bump };

KernelFamily kernel_family_from_string(std::string_view name);
std::string_view to_string(KernelFamily family);

struct KernelSpec {
  KernelFamily family = KernelFamily::uniform;
  double half_width = 1.0;  // L > 0, support is [-L, L]

  // J(y): nonnegative, even, zero outside [-L, L], unit integral.
  double density(double y) const;
};

// Symmetric sampled form of J used by the grid operators. Weights live at
// offsets -K..K with w_k ~ J(k h) h (trapezoid end weights), renormalized so
// that the discrete operator conserves mass exactly.
struct KernelStencil {
  double spacing = 0.0;          // h
  int half_extent = 0;           // K, offsets -K..K
  std::vector<double> weights;   // size 2K+1, index k + K
  double raw_sum = 0.0;          // pre-renormalization mass (diagnostic)

  double weight(int k) const { return weights[static_cast<size_t>(k + half_extent)]; }
  int size() const { return 2 * half_extent + 1; }

  // Discrete transforms of the stencil, the grid-level analogues of the
  // integral transforms below. Exactly even in lambda by construction.
  double mgf(double lambda) const;
  double mgf_cos(double lambda, double gamma) const;
  double phi_lambda_gamma(double d, double lambda, double gamma) const;
};

KernelStencil build_stencil(const KernelSpec& spec, double h);

// M(lambda) = int J(y) e^{lambda y} dy.  Even in lambda, M(0) = 1, >= 1.
double mgf(const KernelSpec& spec, double lambda);

// int J(y) e^{lambda y} cos(gamma y) dy.  Equals mgf at gamma = 0.
double mgf_cos(const KernelSpec& spec, double lambda, double gamma);

// d int J(y) e^{lambda y} sin(gamma y)/gamma dy for 0 < gamma < pi/(2L);
// strictly positive and increasing in lambda > 0.
double phi_lambda_gamma(const KernelSpec& spec, double d, double lambda, double gamma);

}  // namespace nlshift

#endif
