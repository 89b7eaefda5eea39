#include "shide/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "shide/stats.hpp"

namespace shide {

SupportSpec SupportSpec::interval(double l, double u)
{
  if (!(l < u))
    throw std::invalid_argument("SupportSpec: interval requires L < U");
  return { Kind::Interval, l, u };
}

bool SupportSpec::contains(double x) const
{
  switch (kind) {
    case Kind::Unbounded:
      return std::isfinite(x);
    case Kind::LowerBounded:
      return x > lower;
    case Kind::UpperBounded:
      return x < upper;
    case Kind::Interval:
      return x > lower && x < upper;
  }
  return false;
}

double forward_transform(const SupportSpec& support, double x)
{
  if (!support.contains(x))
    throw std::invalid_argument("forward_transform: value " + std::to_string(x) +
                                " is on or outside the declared support");
  switch (support.kind) {
    case SupportSpec::Kind::Unbounded:
      return x;
    case SupportSpec::Kind::LowerBounded:
      return std::log(x - support.lower);
    case SupportSpec::Kind::UpperBounded:
      return std::log(support.upper - x);
    case SupportSpec::Kind::Interval:
      return std::log(x - support.lower) - std::log(support.upper - x);
  }
  return x;
}

double backward_transform(const SupportSpec& support, double z)
{
  switch (support.kind) {
    case SupportSpec::Kind::Unbounded:
      return z;
    case SupportSpec::Kind::LowerBounded: {
      double x = std::exp(z) + support.lower;
      if (!(x > support.lower))
        x = std::nextafter(support.lower, support.lower + 1.0);
      return x;
    }
    case SupportSpec::Kind::UpperBounded: {
      double x = support.upper - std::exp(z);
      if (!(x < support.upper))
        x = std::nextafter(support.upper, support.upper - 1.0);
      return x;
    }
    case SupportSpec::Kind::Interval: {
      const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                                : std::exp(z) / (1.0 + std::exp(z));
      double x = support.lower + p * (support.upper - support.lower);
      if (!(x > support.lower))
        x = std::nextafter(support.lower, support.upper);
      if (!(x < support.upper))
        x = std::nextafter(support.upper, support.lower);
      return x;
    }
  }
  return z;
}

double transform_jacobian(const SupportSpec& support, double x)
{
  switch (support.kind) {
    case SupportSpec::Kind::Unbounded:
      return 1.0;
    case SupportSpec::Kind::LowerBounded:
      return 1.0 / (x - support.lower);
    case SupportSpec::Kind::UpperBounded:
      return 1.0 / (support.upper - x);
    case SupportSpec::Kind::Interval:
      return (support.upper - support.lower) /
             ((x - support.lower) * (support.upper - x));
  }
  return 1.0;
}

namespace detail {

double sturges_width(double span, std::size_t n, std::size_t m)
{
  if (!(span > 0.0))
    throw std::invalid_argument("sturges_width: span must be > 0");
  if (n < 2)
    throw std::invalid_argument("sturges_width: need n >= 2");
  if (m < 1)
    throw std::invalid_argument("sturges_width: need m >= 1");
  const double bins = 1.0 + 3.322 * (std::log10(static_cast<double>(n)) +
                                     std::log10(static_cast<double>(m)));
  return span / bins;
}

} // namespace detail

double bin_width(double data_range, double h, std::size_t n, std::size_t m)
{
  if (!(data_range > 0.0))
    throw std::invalid_argument("bin_width: data range must be > 0");
  if (!(h > 0.0))
    throw std::invalid_argument("bin_width: h must be > 0");
  return detail::sturges_width(data_range + 2.0 * h, n, m);
}

HistogramGrid build_histogram(std::span<const double> pseudo, double theta)
{
  if (pseudo.empty())
    throw std::invalid_argument("build_histogram: empty input");
  if (!(theta > 0.0))
    throw std::invalid_argument("build_histogram: theta must be > 0");

  const auto [lo_it, hi_it] = std::minmax_element(pseudo.begin(), pseudo.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  const std::size_t bins =
    std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / theta)));

  HistogramGrid grid;
  grid.theta = theta;
  grid.total = pseudo.size();
  grid.counts.assign(bins, 0);
  for (double x : pseudo) {
    auto idx = static_cast<std::size_t>((x - lo) / theta);
    if (idx >= bins)
      idx = bins - 1; // final bin is closed
    ++grid.counts[idx];
  }
  grid.midpoints.resize(bins);
  grid.heights.resize(bins);
  const double mass = static_cast<double>(grid.total) * theta;
  for (std::size_t r = 0; r < bins; ++r) {
    grid.midpoints[r] = lo + (static_cast<double>(r) + 0.5) * theta;
    grid.heights[r] = static_cast<double>(grid.counts[r]) / mass;
  }
  return grid;
}

namespace {

std::vector<double> transform_all(std::span<const double> data,
                                  const SupportSpec& support)
{
  std::vector<double> z;
  z.reserve(data.size());
  for (double x : data)
    z.push_back(forward_transform(support, x));
  return z;
}

std::vector<double> pseudo_transformed(std::span<const double> zdata,
                                       const PolynomialKernel& kernel, int m,
                                       Rng& rng)
{
  std::vector<double> out;
  out.reserve(zdata.size() * static_cast<std::size_t>(m));
  const double scale = 2.0 * kernel.h / static_cast<double>(kernel.k);
  for (double z : zdata) {
    for (int j = 0; j < m; ++j) {
      double v = 0.0;
      for (int u = 0; u < kernel.k; ++u)
        v += rng.uniform01() - 0.5;
      out.push_back(z + scale * v);
    }
  }
  return out;
}

double select_bandwidth(std::span<const double> zdata, const ShideConfig& config,
                        bool* clamped)
{
  const BandwidthSpec& bw = config.bandwidth;
  double h = 0.0;
  switch (bw.kind) {
    case BandwidthSpec::Kind::Fixed:
      h = bw.fixed_h;
      if (!(h > 0.0))
        throw std::invalid_argument("shide_estimate: fixed bandwidth must be > 0");
      return h;
    case BandwidthSpec::Kind::AmiseOpt: {
      SelectorInputs in{ zdata.size(), config.k, bw.c, bw.alpha,
                         bw.psi_method, bw.roughness_method, bw.x_alpha };
      h = h_amise(in, psi_normal_reference(zdata, bw.psi_method));
      break;
    }
    case BandwidthSpec::Kind::Percentile: {
      if (bw.calibrated) {
        SelectorInputs in{ zdata.size(), config.k, bw.c, bw.alpha,
                           bw.psi_method, bw.roughness_method, bw.x_alpha };
        h = h_calibrated_percentile(zdata, in,
                                    psi_normal_reference(zdata, bw.psi_method));
      } else {
        h = h_raw_percentile(zdata, bw.alpha);
      }
      break;
    }
  }
  if (!(h > 0.0))
    throw std::runtime_error("shide_estimate: selected bandwidth is not positive");
  // Guard rail against pathological oversmoothing on heavy tails.
  const auto [lo, hi] = std::minmax_element(zdata.begin(), zdata.end());
  const double range = *hi - *lo;
  if (range > 0.0 && h > range) {
    h = range;
    if (clamped)
      *clamped = true;
  }
  return h;
}

} // namespace

BandwidthSpec BandwidthSpec::fixed(double h)
{
  BandwidthSpec spec;
  spec.kind = Kind::Fixed;
  spec.fixed_h = h;
  return spec;
}

BandwidthSpec BandwidthSpec::percentile(double alpha, bool calibrated)
{
  BandwidthSpec spec;
  spec.kind = Kind::Percentile;
  spec.alpha = alpha;
  spec.calibrated = calibrated;
  return spec;
}

std::vector<double> generate_pseudo(std::span<const double> data,
                                    const PolynomialKernel& kernel, int m,
                                    const SupportSpec& support, Rng& rng)
{
  if (data.empty())
    throw std::invalid_argument("generate_pseudo: empty data");
  if (m < 1)
    throw std::invalid_argument("generate_pseudo: need m >= 1");
  const auto z = transform_all(data, support);
  auto pseudo = pseudo_transformed(z, kernel, m, rng);
  if (support.kind != SupportSpec::Kind::Unbounded)
    for (double& v : pseudo)
      v = backward_transform(support, v);
  return pseudo;
}

DensityEstimate shide_estimate(std::span<const double> data, const ShideConfig& config)
{
  if (data.size() < 2)
    throw std::invalid_argument("shide_estimate: need at least 2 observations");
  if (config.m < 1)
    throw std::invalid_argument("shide_estimate: need m >= 1");
  if (config.grid_points < 2)
    throw std::invalid_argument("shide_estimate: grid_points must be >= 2");
  for (double x : data)
    if (!std::isfinite(x))
      throw std::invalid_argument("shide_estimate: non-finite observation");

  const bool unbounded = config.support.kind == SupportSpec::Kind::Unbounded;
  const WorkingScale scale = unbounded ? WorkingScale::Original : config.working_scale;
  const auto zdata = transform_all(data, config.support);

  DensityEstimate est;
  est.support = config.support;
  est.working_scale = scale;
  est.h_used = select_bandwidth(zdata, config, &est.h_clamped);

  const PolynomialKernel kernel(config.k, est.h_used);
  Rng rng(config.seed);
  auto pseudo = pseudo_transformed(zdata, kernel, config.m, rng);
  if (scale == WorkingScale::Original &&
      config.support.kind != SupportSpec::Kind::Unbounded)
    for (double& v : pseudo)
      v = backward_transform(config.support, v);

  const auto [lo_it, hi_it] = std::minmax_element(pseudo.begin(), pseudo.end());
  est.range_lo = *lo_it;
  est.range_hi = *hi_it;
  const double span = est.range_hi - est.range_lo;
  if (!(span > 0.0))
    throw std::runtime_error("shide_estimate: degenerate pseudo-sample range");

  // Adjusted Sturges width over the realized pseudo-range on the
  // working scale (the span plays the role of R + 2h).
  est.theta_used = detail::sturges_width(span, data.size(),
                                         static_cast<std::size_t>(config.m));
  const auto hist = build_histogram(pseudo, est.theta_used);
  est.bins = hist.counts.size();

  std::vector<double> y(hist.heights.size());
  for (std::size_t r = 0; r < y.size(); ++r)
    y[r] = std::sqrt(hist.heights[r]);
  if (y.size() < 2) {
    // A single bin cannot anchor a spline; widen to two knots carrying
    // the same constant height so evaluation stays well defined.
    const double mid = hist.midpoints[0];
    est.spline = fit_natural_spline(
      std::vector<double>{ mid - 0.5 * est.theta_used, mid + 0.5 * est.theta_used },
      std::vector<double>{ y[0], y[0] });
  } else {
    est.spline = fit_natural_spline(hist.midpoints, y);
  }

  if (config.normalize) {
    // Trapezoid of S^2 over the evaluation window on the working scale;
    // equals the original-scale integral exactly (change of variables).
    const std::size_t g = static_cast<std::size_t>(config.grid_points);
    const double step = span / static_cast<double>(g - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      const double u = est.range_lo + step * static_cast<double>(i);
      const double sv = eval_spline(est.spline, u);
      const double w = (i == 0 || i + 1 == g) ? 0.5 : 1.0;
      acc += w * sv * sv;
    }
    acc *= step;
    if (!(acc > 0.0))
      throw std::runtime_error("shide_estimate: cannot normalize a zero estimate");
    est.normalization_constant = 1.0 / acc;
  }
  return est;
}

double evaluate_density(const DensityEstimate& est, double x)
{
  if (!est.support.contains(x))
    return 0.0;
  double w = est.working_scale == WorkingScale::Transformed
               ? forward_transform(est.support, x)
               : x;
  // A 1e-12-relative skin keeps the window test stable against the
  // forward/backward round-trip error at the range edges.
  const double tol = 1e-12 * (est.range_hi - est.range_lo);
  if (w < est.range_lo - tol || w > est.range_hi + tol)
    return 0.0;
  w = std::clamp(w, est.range_lo, est.range_hi);
  const double s = eval_spline(est.spline, w);
  double value = est.normalization_constant * s * s;
  if (est.working_scale == WorkingScale::Transformed)
    value *= transform_jacobian(est.support, x);
  return value;
}

} // namespace shide
