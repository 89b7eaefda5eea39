#include "shide/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shide/stats.hpp"

namespace shide {

namespace {

double scale_estimate(std::span<const double> data)
{
  const double sd = stats::sample_sd(data);
  const double iqr = stats::interquartile_range(data);
  double s = iqr > 0.0 ? std::min(sd, iqr / 1.349) : sd;
  if (!(s > 0.0))
    throw std::invalid_argument("degenerate sample: zero scale");
  return s;
}

// phi^(4)(u) = (u^4 - 6u^2 + 3) phi(u), phi^(6)(u) = (u^6 - 15u^4 + 45u^2 - 15) phi(u)
double phi4(double u)
{
  const double u2 = u * u;
  return ((u2 - 6.0) * u2 + 3.0) * stats::norm_pdf(u);
}

double phi6(double u)
{
  const double u2 = u * u;
  return (((u2 - 15.0) * u2 + 45.0) * u2 - 15.0) * stats::norm_pdf(u);
}

// Psi_r estimate: [sum_{i != j} phi^(r)(d_ij/g) + n phi^(r)(0)] / (n(n-1) g^(r+1))
double psi4_hat(std::span<const double> x, double g)
{
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      sum += phi4((x[i] - x[j]) / g);
  sum = 2.0 * sum + static_cast<double>(n) * phi4(0.0);
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) * std::pow(g, 5));
}

double psi6_hat(std::span<const double> x, double g)
{
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      sum += phi6((x[i] - x[j]) / g);
  sum = 2.0 * sum + static_cast<double>(n) * phi6(0.0);
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) * std::pow(g, 7));
}

} // namespace

KdeEstimate::KdeEstimate(std::span<const double> observations, double bandwidth,
                         KdeMode kde_mode)
  : data(observations.begin(), observations.end())
  , h(bandwidth)
  , mode(kde_mode)
{
  if (data.empty())
    throw std::invalid_argument("KdeEstimate: empty data");
  if (!(h > 0.0))
    throw std::invalid_argument("KdeEstimate: bandwidth must be > 0");
  if (mode == KdeMode::Multiplicative) {
    const bool all_pos = std::all_of(data.begin(), data.end(), [](double v) { return v > 0.0; });
    const bool all_neg = std::all_of(data.begin(), data.end(), [](double v) { return v < 0.0; });
    if (!all_pos && !all_neg)
      throw std::invalid_argument(
        "multiplicative KDE requires strictly positive or strictly negative data");
    sign_domain = all_pos ? SignDomain::Positive : SignDomain::Negative;
  }
}

double kde_evaluate(const KdeEstimate& est, double x)
{
  if (est.mode != KdeMode::Additive)
    throw std::invalid_argument("kde_evaluate: estimate is not additive");
  double sum = 0.0;
  for (double xi : est.data)
    sum += stats::norm_pdf((x - xi) / est.h);
  return sum / (static_cast<double>(est.data.size()) * est.h);
}

double mkde_evaluate(const KdeEstimate& est, double x)
{
  if (est.mode != KdeMode::Multiplicative)
    throw std::invalid_argument("mkde_evaluate: estimate is not multiplicative");
  if (est.sign_domain == SignDomain::Positive ? x <= 0.0 : x >= 0.0)
    return 0.0;
  double sum = 0.0;
  for (double xi : est.data)
    sum += stats::norm_pdf(x / (est.h * xi)) / std::abs(xi);
  return sum / (static_cast<double>(est.data.size()) * est.h);
}

double silverman_bw(std::span<const double> data)
{
  if (data.size() < 2)
    throw std::invalid_argument("silverman_bw: need at least 2 observations");
  const double sd = stats::sample_sd(data);
  if (!(sd > 0.0))
    throw std::invalid_argument("silverman_bw: degenerate sample (zero scale)");
  const double iqr = stats::interquartile_range(data);
  const double scale = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * scale * std::pow(static_cast<double>(data.size()), -0.2);
}

double sj_bw(std::span<const double> data, bool* fell_back)
{
  if (fell_back)
    *fell_back = false;
  const std::size_t n = data.size();
  if (n < 3)
    throw std::invalid_argument("sj_bw: need at least 3 observations");
  const double s = scale_estimate(data);
  const double nd = static_cast<double>(n);

  // Stage pilots from the normal-scale rules for Psi4 and Psi6.
  const double a = 1.241 * s * std::pow(nd, -1.0 / 7.0);
  const double b = 1.230 * s * std::pow(nd, -1.0 / 9.0);
  const double sda = psi4_hat(data, a);
  const double td = -psi6_hat(data, b);

  const auto fallback = [&] {
    if (fell_back)
      *fell_back = true;
    return silverman_bw(data);
  };
  if (!(sda > 0.0) || !(td > 0.0))
    return fallback();

  const double c1 = 1.0 / (2.0 * std::sqrt(stats::kPi) * nd); // R(phi)/n
  const double alph2 = 1.357 * std::pow(sda / td, 1.0 / 7.0);
  const auto f = [&](double h) {
    const double g = alph2 * std::pow(h, 5.0 / 7.0);
    const double psi = psi4_hat(data, g);
    if (!(psi > 0.0))
      return -h; // treat as oversmoothed side
    return std::pow(c1 / psi, 0.2) - h;
  };

  double lo = 1e-3 * s;
  double hi = 10.0 * s;
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if (flo * fhi > 0.0)
    return fallback();
  while (hi - lo > 1e-7 * s) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0)
      return mid;
    if (flo * fmid < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace shide
