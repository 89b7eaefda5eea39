#pragma once

#include <span>
#include <vector>

namespace shide::stats {

inline constexpr double kPi = 3.14159265358979323846;

double norm_pdf(double x);
double norm_cdf(double x);

double mean(std::span<const double> x);

//! Sample standard deviation with n-1 denominator; requires n >= 2.
double sample_sd(std::span<const double> x);

//! Linear-interpolation empirical quantile of a sorted vector:
//! index (n-1)*p, interpolate between the flanking order statistics.
double quantile_sorted(std::span<const double> sorted, double p);

//! Same quantile convention on unsorted data (copies and sorts).
double quantile(std::span<const double> x, double p);

double median(std::span<const double> x);

//! quantile(0.75) - quantile(0.25).
double interquartile_range(std::span<const double> x);

} // namespace shide::stats
