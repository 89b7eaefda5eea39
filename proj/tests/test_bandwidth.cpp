#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "shide/bandwidth.hpp"
#include "shide/bench.hpp"
#include "shide/rng.hpp"
#include "shide/stats.hpp"

using namespace shide;

TEST_CASE("spacings")
{
  CHECK(spacings(std::vector{ 0.0, 1.0, 2.0, 4.0 }) == std::vector{ 1.0, 1.0, 2.0 });
  CHECK(spacings(std::vector{ 5.0, 5.0, 5.0 }) == std::vector{ 0.0, 0.0 });
  CHECK(spacings(std::vector{ 3.0, 1.0, 2.0 }) == std::vector{ 1.0, 1.0 });
  CHECK_THROWS_AS(spacings(std::vector{ 1.0 }), std::invalid_argument);
}

TEST_CASE("spacing_quantile")
{
  CHECK(spacing_quantile(std::vector{ 1.0, 1.0, 2.0 }, 0.5) == 1.0);
  CHECK(spacing_quantile(std::vector{ 1.0, 3.0 }, 0.5) == 2.0);
  CHECK_THROWS_AS(spacing_quantile(std::vector<double>{}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(spacing_quantile(std::vector{ 1.0 }, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(spacing_quantile(std::vector{ 1.0 }, 0.0), std::invalid_argument);
}

TEST_CASE("h_raw_percentile")
{
  CHECK(h_raw_percentile(std::vector{ 0.0, 1.0, 2.0, 4.0 }, 0.5) == 0.5);
  // equally spaced grid: every spacing is s, so h = s/2 for any alpha
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i)
    grid.push_back(0.25 * i);
  for (double alpha : { 0.2, 0.5, 0.8 })
    CHECK(h_raw_percentile(grid, alpha) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK_THROWS_AS(h_raw_percentile(std::vector{ 5.0, 5.0, 5.0 }, 0.5),
                  std::runtime_error);
}

TEST_CASE("psi_normal_reference")
{
  CHECK(psi_normal_reference_from_scale(1.0) ==
        doctest::Approx(0.21157109383040862).epsilon(1e-15));
  CHECK(psi_normal_reference_from_scale(2.0) ==
        doctest::Approx(0.00661159668220027).epsilon(1e-15));
  CHECK_THROWS_AS(psi_normal_reference_from_scale(0.0), std::invalid_argument);

  Rng rng(1234);
  std::vector<double> data(100'000);
  for (auto& v : data)
    v = rng.normal();
  CHECK(psi_normal_reference(data, PsiMethod::NormalRefSd) ==
        doctest::Approx(0.21157109383040862).epsilon(0.03));
  CHECK(psi_normal_reference(data, PsiMethod::NormalRefIqr) ==
        doctest::Approx(0.21157109383040862).epsilon(0.05));

  // strictly decreasing in the scale (s^-5)
  double prev = psi_normal_reference_from_scale(0.5);
  for (double s : { 1.0, 2.0, 4.0 }) {
    const double cur = psi_normal_reference_from_scale(s);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("h_amise: worked example and scaling laws")
{
  SelectorInputs in;
  in.n = 50;
  in.k = 3;
  in.c = 1.0;
  in.roughness_method = RoughnessMethod::Paper; // R(K) = 0.46875
  CHECK(h_amise(in, 0.21157) == doctest::Approx(1.483222964547469).epsilon(1e-12));

  // n -> 32n exactly halves the bandwidth
  SelectorInputs base;
  base.n = 100;
  SelectorInputs scaled = base;
  scaled.n = 3200;
  const double ratio = h_amise(scaled, 0.3) / h_amise(base, 0.3);
  CHECK(std::abs(ratio - 0.5) <= 1e-15);

  // (1 + 1/c): c -> infinity against c = 1 gives 2^(-1/5)
  SelectorInputs c1 = base;
  SelectorInputs cinf = base;
  cinf.c = 1e12;
  CHECK(h_amise(cinf, 0.3) / h_amise(c1, 0.3) ==
        doctest::Approx(std::pow(2.0, -0.2)).epsilon(1e-9));

  CHECK_THROWS_AS(h_amise(base, 0.0), std::invalid_argument);
}

TEST_CASE("pilot_density_at")
{
  Rng rng(4321);
  std::vector<double> data(10'000);
  for (auto& v : data)
    v = rng.normal();
  bool floored = false;
  const double at_median = pilot_density_at(data, stats::median(data), &floored);
  CHECK(at_median == doctest::Approx(stats::norm_pdf(0.0)).epsilon(0.10));
  CHECK_FALSE(floored);

  const double far = pilot_density_at(data, 1e6, &floored);
  CHECK(far == 1e-300);
  CHECK(floored);

  std::vector<double> peaked(200, 0.0);
  for (std::size_t i = 0; i < peaked.size(); ++i)
    peaked[i] = 1e-4 * rng.normal();
  CHECK(pilot_density_at(peaked, 0.0, &floored) > 100.0);
}

TEST_CASE("q_alpha definition")
{
  CHECK(q_alpha(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(q_alpha(0.2) == doctest::Approx(-std::log(0.8)).epsilon(1e-15));
}

TEST_CASE("h_calibrated_percentile: wiring and equivalence windows")
{
  Rng rng(mix_seed(99, { 0, 2000, 0, 0 }));
  const auto data = model_sample(Model::I, 2000, rng);
  SelectorInputs in;
  in.n = data.size();
  const double psi = psi_normal_reference(data, in.psi_method);
  const double hc = h_calibrated_percentile(data, in, psi);
  const double ha = h_amise(in, psi);
  CHECK(hc > 0.0);
  CHECK(hc / ha > 0.6);
  CHECK(hc / ha < 1.6);

  // alpha-robustness: 0.2 and 0.5 agree within 50%
  SelectorInputs a02 = in;
  a02.alpha = 0.2;
  const double hc02 = h_calibrated_percentile(data, a02, psi);
  CHECK(hc02 / hc > 0.5);
  CHECK(hc02 / hc < 1.5);

  CHECK_THROWS_AS(
    h_calibrated_percentile(std::vector{ 2.0, 2.0, 2.0 }, in, psi),
    std::runtime_error);
}

TEST_CASE("raw percentile bandwidth follows the 1/n law")
{
  std::vector<double> medians;
  for (std::size_t n : { std::size_t(100), std::size_t(400), std::size_t(1600) }) {
    std::vector<double> hs;
    for (int rep = 0; rep < 50; ++rep) {
      Rng rng(mix_seed(303, { 0, n, static_cast<std::uint64_t>(rep), 0 }));
      const auto data = model_sample(Model::I, n, rng);
      hs.push_back(h_raw_percentile(data, 0.5));
    }
    medians.push_back(stats::median(hs));
  }
  const double r1 = medians[0] / medians[1];
  const double r2 = medians[1] / medians[2];
  CHECK(r1 > 3.0);
  CHECK(r1 < 5.0);
  CHECK(r2 > 3.0);
  CHECK(r2 < 5.0);
}

TEST_CASE("selector outputs are strictly positive on non-degenerate data")
{
  for (std::uint64_t seed : { 1u, 2u, 3u }) {
    Rng rng(seed);
    std::vector<double> data(120);
    for (auto& v : data)
      v = rng.normal() * 2.0 + 1.0;
    SelectorInputs in;
    in.n = data.size();
    const double psi = psi_normal_reference(data, in.psi_method);
    CHECK(h_amise(in, psi) > 0.0);
    CHECK(h_calibrated_percentile(data, in, psi) > 0.0);
    CHECK(h_raw_percentile(data, 0.5) > 0.0);
  }
}
