#include "shide/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shide {

namespace {

void check_order(int k)
{
  if (k < 1)
    throw std::invalid_argument("kernel order k must be >= 1");
  if (k > kMaxKernelOrder)
    throw std::invalid_argument("kernel order k must be <= " +
                                std::to_string(kMaxKernelOrder) +
                                " (Irwin-Hall sum precision)");
}

double factorial(int n)
{
  double f = 1.0;
  for (int i = 2; i <= n; ++i)
    f *= static_cast<double>(i);
  return f;
}

} // namespace

PolynomialKernel::PolynomialKernel(int order, double half_width)
  : k(order)
  , h(half_width)
{
  check_order(order);
  if (!(half_width > 0.0))
    throw std::invalid_argument("kernel half-width h must be > 0");
}

double fk_pdf(int k, double v)
{
  check_order(k);
  // Evaluate at |v| so symmetry holds bitwise.
  const double a = std::abs(v);
  if (a >= 0.5 * static_cast<double>(k))
    return 0.0;
  // Shifted coordinate x = |v| + k/2 in [k/2, k).
  const double x = a + 0.5 * static_cast<double>(k);
  const int jmax = static_cast<int>(std::floor(x));
  double sum = 0.0;
  double binom = 1.0; // C(k, j), starting at j = 0
  for (int j = 0; j <= jmax; ++j) {
    const double term = binom * std::pow(x - static_cast<double>(j), k - 1);
    sum += (j % 2 == 0) ? term : -term;
    binom *= static_cast<double>(k - j) / static_cast<double>(j + 1);
  }
  const double value = sum / factorial(k - 1);
  return value > 0.0 ? value : 0.0;
}

double kernel_pdf(const PolynomialKernel& kernel, double x)
{
  const double scale = static_cast<double>(kernel.k) / (2.0 * kernel.h);
  return scale * fk_pdf(kernel.k, scale * x);
}

double kernel_cf(int k, double t)
{
  check_order(k);
  if (std::abs(t) < 1e-8)
    return 1.0; // series limit of sinc^k
  const double half = 0.5 * t;
  return std::pow(std::sin(half) / half, k);
}

std::vector<double> sample_noise(const PolynomialKernel& kernel, Rng& rng,
                                 std::size_t count)
{
  std::vector<double> out;
  out.reserve(count);
  const double scale = 2.0 * kernel.h / static_cast<double>(kernel.k);
  for (std::size_t i = 0; i < count; ++i) {
    double v = 0.0;
    for (int j = 0; j < kernel.k; ++j)
      v += rng.uniform01() - 0.5;
    out.push_back(scale * v);
  }
  return out;
}

double sigma_k_sq(int k)
{
  check_order(k);
  return 1.0 / (3.0 * static_cast<double>(k));
}

double roughness(int k, RoughnessMethod method)
{
  check_order(k);
  if (method == RoughnessMethod::Paper) {
    // (k / (2*4^k)) * C(2k, k)
    double binom = 1.0;
    for (int j = 0; j < k; ++j)
      binom *= static_cast<double>(2 * k - j) / static_cast<double>(j + 1);
    return static_cast<double>(k) / (2.0 * std::pow(4.0, k)) * binom;
  }
  // integral of K^2 = (k/2) * f_{2k}(0); needs order 2k within the cap
  if (2 * k > kMaxKernelOrder)
    throw std::invalid_argument(
      "roughness(exact): 2k exceeds the supported Irwin-Hall order");
  return 0.5 * static_cast<double>(k) * fk_pdf(2 * k, 0.0);
}

} // namespace shide
