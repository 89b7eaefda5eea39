#pragma once

#include <span>
#include <vector>

namespace shide {

//! Natural cubic spline on a uniform knot grid.
//!
//! second_derivs holds M_r = S''(b_r) with M_1 = M_B = 0; evaluation
//! outside [knots.front(), knots.back()] continues the endpoint tangent
//! lines (the natural spline's linear continuation).
struct NaturalSpline
{
  std::vector<double> knots;
  std::vector<double> values;
  std::vector<double> second_derivs;
  double spacing = 0.0;
};

//! Interpolates (knots, values) with natural boundary conditions by
//! solving the tridiagonal system M_{i-1} + 4 M_i + M_{i+1} =
//! 6 (y_{i+1} - 2 y_i + y_{i-1}) / theta^2 with the Thomas algorithm.
//! Requires B >= 2, uniform spacing (1e-9 relative) and finite values.
NaturalSpline fit_natural_spline(std::span<const double> knots,
                                 std::span<const double> values);

double eval_spline(const NaturalSpline& spline, double x);

//! First derivative (tangent slope on the extrapolated regions).
double eval_spline_derivative(const NaturalSpline& spline, double x);

} // namespace shide
