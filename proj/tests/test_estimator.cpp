#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "shide/bench.hpp"
#include "shide/estimator.hpp"
#include "shide/rng.hpp"
#include "shide/stats.hpp"
#include "support/testutil.hpp"

using namespace shide;

TEST_CASE("forward/backward transforms: worked values")
{
  CHECK(forward_transform(SupportSpec::lower_bounded(0.0), 1.0) == 0.0);
  CHECK(forward_transform(SupportSpec::interval(0.0, 1.0), 0.5) == 0.0);
  CHECK(forward_transform(SupportSpec::interval(-1.0, 0.5), 0.125) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-13));
  CHECK(forward_transform(SupportSpec::unbounded(), -3.25) == -3.25);

  CHECK(backward_transform(SupportSpec::lower_bounded(0.0), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(backward_transform(SupportSpec::interval(0.0, 1.0), 0.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(backward_transform(SupportSpec::upper_bounded(2.0), std::log(3.0)) ==
        doctest::Approx(-1.0).epsilon(1e-13));

  CHECK_THROWS_WITH_AS(forward_transform(SupportSpec::lower_bounded(0.0), 0.0),
                       doctest::Contains("0.000000"), std::invalid_argument);
  CHECK_THROWS_AS(forward_transform(SupportSpec::interval(-1.0, 0.5), 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(SupportSpec::interval(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("transform round trip on random support/value pairs")
{
  Rng rng(5150);
  for (int i = 0; i < 10'000; ++i) {
    SupportSpec support;
    const double a = rng.uniform(-10.0, 10.0);
    const double b = a + std::exp(rng.uniform(-2.0, 3.0));
    switch (static_cast<int>(rng.uniform01() * 4.0)) {
      case 0:
        support = SupportSpec::unbounded();
        break;
      case 1:
        support = SupportSpec::lower_bounded(a);
        break;
      case 2:
        support = SupportSpec::upper_bounded(b);
        break;
      default:
        support = SupportSpec::interval(a, b);
        break;
    }
    const double z = rng.uniform(-6.0, 6.0);
    const double x = backward_transform(support, z);
    CHECK(support.contains(x));
    const double back = backward_transform(support, forward_transform(support, x));
    CHECK(back == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("transform_jacobian matches a numerical derivative")
{
  const auto numeric = [](const SupportSpec& s, double x) {
    const double e = 1e-6;
    return std::abs(forward_transform(s, x + e) - forward_transform(s, x - e)) /
           (2.0 * e);
  };
  const auto inter = SupportSpec::interval(-1.0, 0.5);
  CHECK(transform_jacobian(inter, 0.2) ==
        doctest::Approx(numeric(inter, 0.2)).epsilon(1e-6));
  const auto lower = SupportSpec::lower_bounded(2.0);
  CHECK(transform_jacobian(lower, 3.7) ==
        doctest::Approx(numeric(lower, 3.7)).epsilon(1e-6));
  const auto upper = SupportSpec::upper_bounded(1.0);
  CHECK(transform_jacobian(upper, -0.4) ==
        doctest::Approx(numeric(upper, -0.4)).epsilon(1e-6));
}

TEST_CASE("generate_pseudo: vanishing noise, support preservation, variance")
{
  Rng rng(31);
  const std::vector<double> one{ 1.0 };
  const auto tiny =
    generate_pseudo(one, PolynomialKernel(1, 1e-12), 3, SupportSpec::unbounded(), rng);
  REQUIRE(tiny.size() == 3);
  for (double v : tiny)
    CHECK(std::abs(v - 1.0) <= 1e-12);

  Rng data_rng(32);
  const auto exp_data = model_sample(Model::IV, 50, data_rng);
  Rng noise_rng(33);
  const auto pos = generate_pseudo(exp_data, PolynomialKernel(3, 0.8), 10,
                                   SupportSpec::lower_bounded(0.0), noise_rng);
  CHECK(pos.size() == 500);
  for (double v : pos)
    CHECK(v > 0.0);

  Rng var_rng(34);
  const std::vector<double> zero{ 0.0 };
  const auto draws = generate_pseudo(zero, PolynomialKernel(2, 1.0), 100'000,
                                     SupportSpec::unbounded(), var_rng);
  double mean = 0.0;
  for (double v : draws)
    mean += v;
  mean /= static_cast<double>(draws.size());
  double ss = 0.0;
  for (double v : draws)
    ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(draws.size() - 1);
  CHECK(std::abs(var - 1.0 / 6.0) < 1.871e-3); // 3 SE at 1e5 draws

  CHECK_THROWS_AS(generate_pseudo(std::vector<double>{}, PolynomialKernel(1, 1.0), 2,
                                  SupportSpec::unbounded(), rng),
                  std::invalid_argument);
}

TEST_CASE("bin_width: adjusted Sturges rule")
{
  CHECK(bin_width(4.0, 0.2, 50, 10) ==
        doctest::Approx(0.441502062670597).epsilon(1e-12));
  // degenerate h = 0 only through the internal helper
  CHECK(detail::sturges_width(1.0, 10, 1) ==
        doctest::Approx(0.2313743637205).epsilon(1e-12));
  // m = 1, h -> 0 reduces to the classical Sturges width R/(1 + 3.322 log10 n)
  CHECK(detail::sturges_width(2.5, 200, 1) ==
        doctest::Approx(2.5 / (1.0 + 3.322 * std::log10(200.0))).epsilon(1e-13));

  CHECK_THROWS_AS(bin_width(0.0, 0.1, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(bin_width(1.0, 0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(bin_width(1.0, 0.1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(bin_width(1.0, 0.1, 10, 0), std::invalid_argument);
}

TEST_CASE("build_histogram: binning conventions and mass")
{
  SUBCASE("all values in one bin")
  {
    std::vector<double> tight;
    for (int i = 0; i < 100; ++i)
      tight.push_back(0.1 + 0.003 * i);
    const auto grid = build_histogram(tight, 2.0);
    REQUIRE(grid.counts.size() >= 1);
    CHECK(grid.counts[0] == 100);
    CHECK(grid.heights[0] == doctest::Approx(1.0 / 2.0).epsilon(1e-14));
  }
  SUBCASE("boundary value goes to the upper bin")
  {
    const auto grid = build_histogram(std::vector{ 0.0, 1.0, 2.0, 3.0 }, 2.0);
    REQUIRE(grid.counts.size() == 2);
    CHECK(grid.counts[0] == 2);
    CHECK(grid.counts[1] == 2);
    CHECK(grid.heights[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(grid.heights[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(grid.midpoints[0] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("counting conservation and unit mass on random inputs")
  {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 400);
      std::vector<double> x(n);
      for (auto& v : x)
        v = rng.uniform(-7.0, 13.0);
      const double theta = std::exp(rng.uniform(-3.0, 1.0));
      const auto grid = build_histogram(x, theta);
      std::size_t total = 0;
      double mass = 0.0;
      for (std::size_t r = 0; r < grid.counts.size(); ++r) {
        total += grid.counts[r];
        mass += grid.heights[r];
        CHECK(grid.heights[r] ==
              static_cast<double>(grid.counts[r]) /
                (static_cast<double>(grid.total) * grid.theta));
      }
      CHECK(total == n);
      CHECK(mass * theta == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(build_histogram(std::vector<double>{}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_histogram(std::vector{ 1.0 }, 0.0), std::invalid_argument);
}

TEST_CASE("shide_estimate: accuracy on standard normal data")
{
  Rng rng(mix_seed(404, { 0, 500, 0, 0 }));
  const auto data = model_sample(Model::I, 500, rng);
  ShideConfig config;
  config.seed = 2718;
  const auto est = shide_estimate(data, config);

  const double lo = *std::min_element(data.begin(), data.end());
  const double hi = *std::max_element(data.begin(), data.end());
  std::vector<double> grid(512), ev(512), truth(512);
  for (int i = 0; i < 512; ++i) {
    grid[i] = lo + (hi - lo) * i / 511.0;
    ev[i] = evaluate_density(est, grid[i]);
    truth[i] = stats::norm_pdf(grid[i]);
  }
  CHECK(mise(ev, truth, grid) < 0.02);
}

TEST_CASE("shide_estimate: support contract and determinism")
{
  Rng rng(mix_seed(405, { 3, 50, 0, 0 }));
  const auto data = model_sample(Model::IV, 50, rng);
  ShideConfig config;
  config.support = SupportSpec::lower_bounded(0.0);
  config.seed = 9;
  const auto est = shide_estimate(data, config);
  CHECK(evaluate_density(est, -0.5) == 0.0);
  CHECK(evaluate_density(est, 0.0) == 0.0);
  CHECK(evaluate_density(est, stats::median(data)) > 0.0);

  const auto est2 = shide_estimate(data, config);
  CHECK(est.h_used == est2.h_used);
  CHECK(est.theta_used == est2.theta_used);
  CHECK(est.bins == est2.bins);
  for (int i = 0; i <= 200; ++i) {
    const double x = -1.0 + 0.05 * i;
    CHECK(evaluate_density(est, x) == evaluate_density(est2, x));
  }

  CHECK_THROWS_AS(shide_estimate(std::vector{ 1.0 }, ShideConfig{}),
                  std::invalid_argument);
}

TEST_CASE("degenerate-noise limit reproduces the raw-data histogram")
{
  Rng data_rng(606);
  std::vector<double> data(100);
  for (auto& v : data)
    v = data_rng.normal();

  ShideConfig config;
  config.k = 1;
  config.m = 1;
  config.bandwidth = BandwidthSpec::fixed(1e-12);
  config.seed = 4;
  const auto est = shide_estimate(data, config);

  Rng noise_rng(4);
  const auto pseudo = generate_pseudo(data, PolynomialKernel(1, 1e-12), 1,
                                      SupportSpec::unbounded(), noise_rng);
  const auto pseudo_grid = build_histogram(pseudo, est.theta_used);

  // bin the raw data on the same grid (same anchor, same width)
  std::vector<std::size_t> raw_counts(pseudo_grid.counts.size(), 0);
  for (double x : data) {
    auto idx = static_cast<std::size_t>((x - est.range_lo) / est.theta_used);
    if (idx >= raw_counts.size())
      idx = raw_counts.size() - 1;
    ++raw_counts[idx];
  }
  CHECK(pseudo_grid.counts == raw_counts);
}

TEST_CASE("normalize: quadrature of the estimate over an interval support")
{
  Rng rng(mix_seed(707, { 4, 300, 0, 0 }));
  const auto data = model_sample(Model::V, 300, rng);

  ShideConfig config;
  config.support = SupportSpec::interval(-1.0, 0.5);
  config.seed = 12;
  config.grid_points = 4097;

  const auto plain = shide_estimate(data, config);
  const double mass_plain = testutil::trapezoid(
    [&](double x) { return evaluate_density(plain, x); }, -1.0, 0.5, 16385);
  CHECK(std::abs(mass_plain - 1.0) < 0.1);

  config.normalize = true;
  const auto normed = shide_estimate(data, config);
  const double mass = testutil::trapezoid(
    [&](double x) { return evaluate_density(normed, x); }, normed.range_lo,
    normed.range_hi, 16385);
  CHECK(std::abs(mass - 1.0) < 1e-6);
}

TEST_CASE("MISE decreases with n on standard normal data (median of 30 reps)")
{
  std::vector<double> medians;
  for (std::size_t n : { std::size_t(50), std::size_t(200), std::size_t(800) }) {
    std::vector<double> mises;
    for (int rep = 0; rep < 30; ++rep) {
      Rng rng(mix_seed(808, { 0, n, static_cast<std::uint64_t>(rep), 0 }));
      const auto data = model_sample(Model::I, n, rng);
      ShideConfig config;
      config.seed = mix_seed(808, { 0, n, static_cast<std::uint64_t>(rep), 1 });
      const auto est = shide_estimate(data, config);
      const double lo = *std::min_element(data.begin(), data.end());
      const double hi = *std::max_element(data.begin(), data.end());
      std::vector<double> grid(256), ev(256), tr(256);
      for (int i = 0; i < 256; ++i) {
        grid[i] = lo + (hi - lo) * i / 255.0;
        ev[i] = evaluate_density(est, grid[i]);
        tr[i] = stats::norm_pdf(grid[i]);
      }
      mises.push_back(mise(ev, tr, grid));
    }
    medians.push_back(stats::median(mises));
  }
  CHECK(medians[1] < medians[0]);
  CHECK(medians[2] < medians[1]);
}

TEST_CASE("evaluate_density is zero outside support for random bounded fits")
{
  Rng rng(909);
  for (int trial = 0; trial < 60; ++trial) {
    const double l = rng.uniform(-4.0, 0.0);
    const double u = l + std::exp(rng.uniform(-0.5, 1.5));
    SupportSpec support;
    const int kind = static_cast<int>(rng.uniform01() * 3.0);
    if (kind == 0)
      support = SupportSpec::lower_bounded(l);
    else if (kind == 1)
      support = SupportSpec::upper_bounded(u);
    else
      support = SupportSpec::interval(l, u);

    std::vector<double> data(40);
    for (auto& v : data)
      v = backward_transform(support, rng.normal());

    ShideConfig config;
    config.support = support;
    config.seed = trial;
    config.m = 5;
    config.working_scale =
      rng.uniform01() < 0.5 ? WorkingScale::Original : WorkingScale::Transformed;
    config.bandwidth = BandwidthSpec::fixed(0.4);
    const auto est = shide_estimate(data, config);

    if (kind != 1) {
      CHECK(evaluate_density(est, l) == 0.0);
      CHECK(evaluate_density(est, l - 0.7) == 0.0);
    }
    if (kind != 0) {
      CHECK(evaluate_density(est, u) == 0.0);
      CHECK(evaluate_density(est, u + 0.7) == 0.0);
    }
    // nonnegative inside
    for (int i = 0; i < 25; ++i)
      CHECK(evaluate_density(est, backward_transform(support, rng.uniform(-3, 3))) >=
            0.0);
  }
}
