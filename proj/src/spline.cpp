#include "shide/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shide {

namespace {

// Locate the segment index i with knots[i] <= x < knots[i+1], clamped to
// the end segments for evaluation of the boundary cubics.
std::size_t segment_index(const NaturalSpline& s, double x)
{
  const double pos = (x - s.knots.front()) / s.spacing;
  const auto last = s.knots.size() - 2;
  if (pos <= 0.0)
    return 0;
  const auto i = static_cast<std::size_t>(pos);
  return std::min(i, last);
}

} // namespace

NaturalSpline fit_natural_spline(std::span<const double> knots,
                                 std::span<const double> values)
{
  const std::size_t n = knots.size();
  if (n < 2)
    throw std::invalid_argument("fit_natural_spline: need at least 2 knots");
  if (values.size() != n)
    throw std::invalid_argument("fit_natural_spline: knots/values size mismatch");

  const double theta = (knots.back() - knots.front()) / static_cast<double>(n - 1);
  if (!(theta > 0.0))
    throw std::invalid_argument("fit_natural_spline: knots must be increasing");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double step = knots[i + 1] - knots[i];
    if (std::abs(step - theta) > 1e-9 * std::max(1.0, std::abs(theta)))
      throw std::invalid_argument("fit_natural_spline: non-uniform knot grid");
  }
  for (double y : values)
    if (!std::isfinite(y))
      throw std::invalid_argument("fit_natural_spline: non-finite value");

  NaturalSpline s;
  s.knots.assign(knots.begin(), knots.end());
  s.values.assign(values.begin(), values.end());
  s.spacing = theta;
  s.second_derivs.assign(n, 0.0);

  if (n > 2) {
    // Thomas algorithm on the strictly diagonally dominant interior
    // system (diagonal 4, off-diagonals 1); no pivoting needed.
    const std::size_t m = n - 2;
    std::vector<double> diag(m, 4.0);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i)
      rhs[i] = 6.0 * (values[i + 2] - 2.0 * values[i + 1] + values[i]) / (theta * theta);
    for (std::size_t i = 1; i < m; ++i) {
      const double w = 1.0 / diag[i - 1];
      diag[i] -= w;
      rhs[i] -= w * rhs[i - 1];
    }
    s.second_derivs[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i >= 1; --i)
      s.second_derivs[i] = (rhs[i - 1] - s.second_derivs[i + 1]) / diag[i - 1];
  }
  return s;
}

double eval_spline(const NaturalSpline& s, double x)
{
  const double lo = s.knots.front();
  const double hi = s.knots.back();
  if (x < lo)
    return s.values.front() + eval_spline_derivative(s, lo) * (x - lo);
  if (x > hi)
    return s.values.back() + eval_spline_derivative(s, hi) * (x - hi);

  const std::size_t i = segment_index(s, x);
  const double theta = s.spacing;
  const double a = x - s.knots[i];
  const double b = s.knots[i + 1] - x;
  const double mi = s.second_derivs[i];
  const double mj = s.second_derivs[i + 1];
  return mj * a * a * a / (6.0 * theta) + mi * b * b * b / (6.0 * theta) +
         (s.values[i + 1] / theta - mj * theta / 6.0) * a +
         (s.values[i] / theta - mi * theta / 6.0) * b;
}

double eval_spline_derivative(const NaturalSpline& s, double x)
{
  const double theta = s.spacing;
  const std::size_t i = segment_index(s, std::clamp(x, s.knots.front(), s.knots.back()));
  const double xc = std::clamp(x, s.knots.front(), s.knots.back());
  const double a = xc - s.knots[i];
  const double b = s.knots[i + 1] - xc;
  const double mi = s.second_derivs[i];
  const double mj = s.second_derivs[i + 1];
  return mj * a * a / (2.0 * theta) - mi * b * b / (2.0 * theta) +
         (s.values[i + 1] - s.values[i]) / theta - (mj - mi) * theta / 6.0;
}

} // namespace shide
