#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shide/bandwidth.hpp"
#include "shide/kernel.hpp"
#include "shide/rng.hpp"
#include "shide/spline.hpp"

namespace shide {

//! Domain constraint of the data: unbounded, bounded on one side, or an
//! interval. Drives the forward/backward transformations of the
//! pseudo-data step.
struct SupportSpec
{
  enum class Kind { Unbounded, LowerBounded, UpperBounded, Interval };

  Kind kind = Kind::Unbounded;
  double lower = 0.0;
  double upper = 0.0;

  static SupportSpec unbounded() { return {}; }
  static SupportSpec lower_bounded(double l) { return { Kind::LowerBounded, l, 0.0 }; }
  static SupportSpec upper_bounded(double u) { return { Kind::UpperBounded, 0.0, u }; }
  static SupportSpec interval(double l, double u);

  //! Strict interior test.
  bool contains(double x) const;
};

//! Unbounded: x. LowerBounded(L): log(x - L). UpperBounded(U): log(U - x).
//! Interval(L, U): logit((x - L)/(U - L)). Errors if x is on or outside
//! the boundary.
double forward_transform(const SupportSpec& support, double x);

//! Exact inverse of forward_transform; maps the whole real line into the
//! open support.
double backward_transform(const SupportSpec& support, double z);

//! |dw/dx| of the forward transform at x (1 when unbounded).
double transform_jacobian(const SupportSpec& support, double x);

//! Uniform-width density histogram of a pseudo-sample. heights satisfy
//! theta * sum(heights) = 1 with heights[r] = counts[r] / (total * theta).
struct HistogramGrid
{
  double theta = 0.0;
  std::vector<double> midpoints;
  std::vector<double> heights;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

//! Adjusted Sturges bin width (R + 2h) / (1 + 3.322 (log10 n + log10 m)).
double bin_width(double data_range, double h, std::size_t n, std::size_t m);

namespace detail {
//! Sturges width from an explicit span; bin_width passes span = R + 2h.
//! Split out so the degenerate h = 0 case stays testable.
double sturges_width(double span, std::size_t n, std::size_t m);
}

//! Bins pseudo into B = ceil(range/theta) half-open bins [left, right)
//! anchored at min(pseudo); the final bin is closed so max(pseudo) counts.
HistogramGrid build_histogram(std::span<const double> pseudo, double theta);

//! For each observation: forward-transform, add m independent kernel
//! noise draws, transform back. Outputs are strictly inside the support.
std::vector<double> generate_pseudo(std::span<const double> data,
                                    const PolynomialKernel& kernel, int m,
                                    const SupportSpec& support, Rng& rng);

enum class WorkingScale { Original, Transformed };

struct BandwidthSpec
{
  enum class Kind { Fixed, AmiseOpt, Percentile };

  Kind kind = Kind::AmiseOpt;
  double fixed_h = 0.0;
  double c = 1.0;
  double alpha = 0.5;
  bool calibrated = true; // Percentile only: calibrated vs raw d_alpha/2
  PsiMethod psi_method = PsiMethod::NormalRefSd;
  RoughnessMethod roughness_method = RoughnessMethod::Exact;
  XAlphaSpec x_alpha{};

  static BandwidthSpec fixed(double h);
  static BandwidthSpec amise_opt() { return {}; }
  static BandwidthSpec percentile(double alpha = 0.5, bool calibrated = true);
};

struct ShideConfig
{
  int k = 3;
  int m = 10;
  BandwidthSpec bandwidth{};
  SupportSpec support{};
  std::uint64_t seed = 0;
  bool normalize = false;
  int grid_points = 512;
  WorkingScale working_scale = WorkingScale::Original;
};

//! Fitted SHIDE estimate. The spline lives on the working scale
//! (original by default, transformed when configured); range_lo/range_hi
//! are the pseudo-sample extremes on that scale, outside which the
//! density is zero.
struct DensityEstimate
{
  NaturalSpline spline;
  SupportSpec support;
  WorkingScale working_scale = WorkingScale::Original;
  double range_lo = 0.0;
  double range_hi = 0.0;
  double h_used = 0.0;
  double theta_used = 0.0;
  std::size_t bins = 0;
  double normalization_constant = 1.0;
  bool h_clamped = false;
};

//! Full pipeline: select h, simulate pseudo-data, bin with the adjusted
//! Sturges width, interpolate sqrt(heights) with a natural cubic spline.
DensityEstimate shide_estimate(std::span<const double> data, const ShideConfig& config);

//! Density on the original scale: squared spline (times the transform
//! Jacobian on the transformed working scale), zero outside the support
//! and outside the pseudo-data range.
double evaluate_density(const DensityEstimate& estimate, double x);

} // namespace shide
