#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shide/estimator.hpp"
#include "shide/rng.hpp"

namespace shide {

//! Simulation models of the benchmark study:
//! I  N(0,1); II 0.35 N(-1,1) + 0.65 N(2,2); III Cauchy(0,1);
//! IV Exponential(1); V truncated N(0, sigma) on (-1, 0.5).
//! Normal parameters follow the (mean, sd) convention.
enum class Model { I, II, III, IV, V };

enum class BenchMethod { KdeSj, ShideOpt, ShidePerc };

const char* model_name(Model m);
const char* method_name(BenchMethod m);

std::vector<double> model_sample(Model model, std::size_t n, Rng& rng,
                                 double model5_sigma = 3.0);

double model_pdf(Model model, double x, double model5_sigma = 3.0);

//! Composite trapezoid of (estimate - truth)^2 over a uniform grid.
double mise(std::span<const double> estimate_values,
            std::span<const double> truth_values, std::span<const double> grid);

//! Median (linear-interpolation quantile at 0.5) and MAD (median of
//! absolute deviations, no consistency factor).
std::pair<double, double> median_mad(std::span<const double> values);

struct BenchmarkOptions
{
  std::vector<Model> models{ Model::I, Model::II, Model::III, Model::IV, Model::V };
  std::vector<std::size_t> sizes{ 50, 500 };
  int reps = 300;
  std::uint64_t base_seed = 0;
  std::vector<BenchMethod> methods{ BenchMethod::KdeSj, BenchMethod::ShideOpt,
                                    BenchMethod::ShidePerc };
  int jobs = 0; // 0 = machine parallelism
  double model5_sigma = 3.0;
  int grid_points = 512;
  int k = 3;
  int m = 10;
  double c = 1.0;
  double alpha = 0.5;
  RoughnessMethod roughness = RoughnessMethod::Exact;
};

struct BenchmarkRecord
{
  Model model;
  std::size_t n = 0;
  BenchMethod method;
  std::vector<double> replication_mises;
  double median = 0.0;
  double mad = 0.0;
  std::string fingerprint;
};

//! Runs every (model, n, rep) cell: data drawn from a seed mixed out of
//! (base_seed, model, n, rep), the same data handed to every method,
//! MISE taken on a 512-point grid over the data range padded by 3h.
//! Replications fan out over a worker pool; records come back in
//! canonical (model, n, method) order regardless of the job count.
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkOptions& options);

} // namespace shide
