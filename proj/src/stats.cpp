#include "shide/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shide::stats {

double norm_pdf(double x)
{
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double norm_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double mean(std::span<const double> x)
{
  if (x.empty())
    throw std::invalid_argument("mean: empty input");
  double s = 0.0;
  for (double v : x)
    s += v;
  return s / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x)
{
  if (x.size() < 2)
    throw std::invalid_argument("sample_sd: need at least 2 observations");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x)
    ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double p)
{
  if (sorted.empty())
    throw std::invalid_argument("quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("quantile: p must be in [0, 1]");
  const double idx = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(idx);
  if (lo + 1 >= sorted.size())
    return sorted.back();
  const double frac = idx - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> x, double p)
{
  std::vector<double> copy(x.begin(), x.end());
  std::sort(copy.begin(), copy.end());
  return quantile_sorted(copy, p);
}

double median(std::span<const double> x)
{
  return quantile(x, 0.5);
}

double interquartile_range(std::span<const double> x)
{
  std::vector<double> copy(x.begin(), x.end());
  std::sort(copy.begin(), copy.end());
  return quantile_sorted(copy, 0.75) - quantile_sorted(copy, 0.25);
}

} // namespace shide::stats
