#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "shide/kernel.hpp"

namespace shide {

//! Exponential-limit quantile of scaled uniform spacings.
inline double q_alpha(double alpha)
{
  return -std::log1p(-alpha);
}

enum class PsiMethod { NormalRefSd, NormalRefIqr };

//! Where the calibrated percentile selector evaluates its pilot density.
//!
//! SpacingLocation (default) averages the pilot over the gaps ranked
//! near the alpha-quantile spacing, the interior region the asymptotic
//! equivalence argument is built on. Quantile(q) evaluates at the sample
//! q-quantile instead (q = 0.5 is the sample median).
struct XAlphaSpec
{
  enum class Mode { SpacingLocation, Quantile };
  Mode mode = Mode::SpacingLocation;
  double q = 0.5;

  static XAlphaSpec spacing_location() { return {}; }
  static XAlphaSpec quantile(double q) { return { Mode::Quantile, q }; }
  static XAlphaSpec median() { return quantile(0.5); }
};

struct SelectorInputs
{
  std::size_t n = 0;
  int k = 3;
  double c = 1.0; // coupling constant; [0.5, 2] recommended
  double alpha = 0.5;
  PsiMethod psi_method = PsiMethod::NormalRefSd;
  RoughnessMethod roughness_method = RoughnessMethod::Exact;
  XAlphaSpec x_alpha{};
};

//! Consecutive differences of the sorted data; length n - 1.
std::vector<double> spacings(std::span<const double> data);

//! Linear-interpolation empirical quantile of the spacings.
double spacing_quantile(std::span<const double> spacing_values, double alpha);

//! Raw spacing rule h = d_alpha / 2. Errors on an all-ties sample.
double h_raw_percentile(std::span<const double> data, double alpha);

//! Normal-reference curvature functional 3 s^-5 / (8 sqrt(pi)).
double psi_normal_reference_from_scale(double s);
double psi_normal_reference(std::span<const double> data, PsiMethod method);

//! AMISE-optimal bandwidth
//! (R(K)(1 + 1/c) / (sigma_K^4 Psi))^(1/5) n^(-1/5).
double h_amise(const SelectorInputs& inputs, double psi_hat);

//! Gaussian-kernel pilot density at x with the Silverman bandwidth;
//! floored at 1e-300 (flag set) when no mass lies nearby.
double pilot_density_at(std::span<const double> data, double x,
                        bool* floored = nullptr);

//! Calibrated percentile bandwidth h = lambda_n d_alpha with
//! lambda_n = n^(4/5) (R(K)(1+1/c)/(sigma_K^4 Psi))^(1/5) f_pilot(x_alpha)/q_alpha
//! and q_alpha = -log(1 - alpha).
double h_calibrated_percentile(std::span<const double> data,
                               const SelectorInputs& inputs, double psi_hat);

} // namespace shide
