#pragma once

#include <span>
#include <vector>

#include "shide/rng.hpp"

namespace shide {

//! Largest supported kernel order. The alternating Irwin-Hall sum in
//! fk_pdf loses precision beyond this; the method targets small orders
//! anyway (k <= 3 in typical use).
inline constexpr int kMaxKernelOrder = 30;

enum class RoughnessMethod { Paper, Exact };

//! Bounded polynomial noise kernel: order k (number of convolved
//! uniforms) and support half-width h. The scaled kernel
//! K_h(x) = (k/2h) f_k(kx/(2h)) is a density supported on [-h, h].
struct PolynomialKernel
{
  int k;
  double h;

  PolynomialKernel(int order, double half_width);
};

//! Density of V_k = sum of k iid uniforms on [-1/2, 1/2], evaluated via
//! the shifted Irwin-Hall closed form. Symmetric, supported on [-k/2, k/2].
double fk_pdf(int k, double v);

//! Scaled kernel density K_h(x); zero for |x| > h.
double kernel_pdf(const PolynomialKernel& kernel, double x);

//! Characteristic function of V_k: [sinc(t/2)]^k, with the removable
//! singularity at t = 0 handled exactly.
double kernel_cf(int k, double t);

//! count iid draws of the noise term (2h/k) V_k; every draw lies in [-h, h].
std::vector<double> sample_noise(const PolynomialKernel& kernel, Rng& rng,
                                 std::size_t count);

//! Scaled second moment of the base kernel: sigma_K^2 = 1/(3k).
double sigma_k_sq(int k);

//! Roughness R(K) of the base kernel (support [-1, 1]).
//!
//! Paper:  the binomial form (k / (2*4^k)) * C(2k, k).
//! Exact:  integral of K^2, equal to (k/2) * f_{2k}(0).
//! The two disagree for every k (e.g. k=1: 0.25 vs 0.5); both are kept
//! and the bandwidth selectors take the method as a knob.
double roughness(int k, RoughnessMethod method);

} // namespace shide
