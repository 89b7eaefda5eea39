#include "shide/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "shide/baseline.hpp"
#include "shide/stats.hpp"

namespace shide {

const char* model_name(Model m)
{
  switch (m) {
    case Model::I:
      return "I";
    case Model::II:
      return "II";
    case Model::III:
      return "III";
    case Model::IV:
      return "IV";
    case Model::V:
      return "V";
  }
  return "?";
}

const char* method_name(BenchMethod m)
{
  switch (m) {
    case BenchMethod::KdeSj:
      return "kde_sj";
    case BenchMethod::ShideOpt:
      return "shide_opt";
    case BenchMethod::ShidePerc:
      return "shide_perc";
  }
  return "?";
}

std::vector<double> model_sample(Model model, std::size_t n, Rng& rng,
                                 double model5_sigma)
{
  if (n < 1)
    throw std::invalid_argument("model_sample: need n >= 1");
  std::vector<double> x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (model) {
      case Model::I:
        x.push_back(rng.normal());
        break;
      case Model::II:
        if (rng.uniform01() < 0.35)
          x.push_back(-1.0 + rng.normal());
        else
          x.push_back(2.0 + 2.0 * rng.normal());
        break;
      case Model::III:
        x.push_back(rng.cauchy());
        break;
      case Model::IV:
        x.push_back(rng.exponential());
        break;
      case Model::V: {
        // rejection from the untruncated normal; acceptance ~ 0.19
        double z;
        do {
          z = model5_sigma * rng.normal();
        } while (!(z > -1.0 && z < 0.5));
        x.push_back(z);
        break;
      }
    }
  }
  return x;
}

double model_pdf(Model model, double x, double model5_sigma)
{
  switch (model) {
    case Model::I:
      return stats::norm_pdf(x);
    case Model::II:
      return 0.35 * stats::norm_pdf(x + 1.0) +
             0.65 * 0.5 * stats::norm_pdf((x - 2.0) / 2.0);
    case Model::III:
      return 1.0 / (stats::kPi * (1.0 + x * x));
    case Model::IV:
      return x < 0.0 ? 0.0 : std::exp(-x);
    case Model::V: {
      if (!(x > -1.0 && x < 0.5))
        return 0.0;
      const double z = stats::norm_cdf(0.5 / model5_sigma) -
                       stats::norm_cdf(-1.0 / model5_sigma);
      return stats::norm_pdf(x / model5_sigma) / (model5_sigma * z);
    }
  }
  return 0.0;
}

double mise(std::span<const double> estimate_values,
            std::span<const double> truth_values, std::span<const double> grid)
{
  const std::size_t n = grid.size();
  if (n < 2)
    throw std::invalid_argument("mise: need at least 2 grid points");
  if (estimate_values.size() != n || truth_values.size() != n)
    throw std::invalid_argument("mise: length mismatch");
  const double step = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (std::abs(grid[i + 1] - grid[i] - step) > 1e-9 * std::max(1.0, std::abs(step)))
      throw std::invalid_argument("mise: grid is not uniform");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = estimate_values[i] - truth_values[i];
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += w * d * d;
  }
  return acc * step;
}

std::pair<double, double> median_mad(std::span<const double> values)
{
  if (values.empty())
    throw std::invalid_argument("median_mad: empty input");
  const double med = stats::median(values);
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    dev[i] = std::abs(values[i] - med);
  return { med, stats::median(dev) };
}

namespace {

SupportSpec bench_support(Model model)
{
  switch (model) {
    case Model::IV:
      return SupportSpec::lower_bounded(0.0);
    case Model::V:
      return SupportSpec::interval(-1.0, 0.5);
    default:
      return SupportSpec::unbounded();
  }
}

std::size_t model_index(Model m)
{
  return static_cast<std::size_t>(m);
}

double run_one_method(BenchMethod method, Model model,
                      std::span<const double> data, std::uint64_t noise_seed,
                      const BenchmarkOptions& opt)
{
  double h = 0.0;
  DensityEstimate shide;
  std::vector<double> dummy{ 0.0 };
  KdeEstimate kde(dummy, 1.0, KdeMode::Additive);
  if (method == BenchMethod::KdeSj) {
    h = sj_bw(data);
    kde = KdeEstimate(data, h, KdeMode::Additive);
  } else {
    ShideConfig config;
    config.k = opt.k;
    config.m = opt.m;
    config.seed = noise_seed;
    config.support = bench_support(model);
    config.grid_points = opt.grid_points;
    if (method == BenchMethod::ShideOpt) {
      config.bandwidth = BandwidthSpec::amise_opt();
    } else {
      config.bandwidth = BandwidthSpec::percentile(opt.alpha, true);
    }
    config.bandwidth.c = opt.c;
    config.bandwidth.roughness_method = opt.roughness;
    shide = shide_estimate(data, config);
    h = shide.h_used;
  }

  const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
  const double lo = *lo_it - 3.0 * h;
  const double hi = *hi_it + 3.0 * h;
  const std::size_t g = static_cast<std::size_t>(opt.grid_points);
  const double step = (hi - lo) / static_cast<double>(g - 1);

  std::vector<double> grid(g), est(g), truth(g);
  for (std::size_t i = 0; i < g; ++i) {
    grid[i] = lo + step * static_cast<double>(i);
    truth[i] = model_pdf(model, grid[i], opt.model5_sigma);
    est[i] = method == BenchMethod::KdeSj ? kde_evaluate(kde, grid[i])
                                          : evaluate_density(shide, grid[i]);
  }
  return mise(est, truth, grid);
}

std::string make_fingerprint(const BenchmarkOptions& opt)
{
  std::ostringstream out;
  out << "models=";
  for (std::size_t i = 0; i < opt.models.size(); ++i)
    out << (i ? "," : "") << model_name(opt.models[i]);
  out << " n=";
  for (std::size_t i = 0; i < opt.sizes.size(); ++i)
    out << (i ? "," : "") << opt.sizes[i];
  out << " reps=" << opt.reps << " seed=" << opt.base_seed << " methods=";
  for (std::size_t i = 0; i < opt.methods.size(); ++i)
    out << (i ? "," : "") << method_name(opt.methods[i]);
  out << " k=" << opt.k << " m=" << opt.m << " c=" << opt.c
      << " alpha=" << opt.alpha
      << " roughness=" << (opt.roughness == RoughnessMethod::Exact ? "exact" : "paper")
      << " psi=sd x_alpha=spacing shide_scale=original"
      << " model5_sigma=" << opt.model5_sigma << " grid=" << opt.grid_points
      << " window=data_range_pm_3h rng=xoshiro256pp/splitmix64";
  return out.str();
}

} // namespace

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkOptions& options)
{
  if (options.reps < 1)
    throw std::invalid_argument("run_benchmark: need reps >= 1");
  if (options.models.empty() || options.sizes.empty() || options.methods.empty())
    throw std::invalid_argument("run_benchmark: empty model/size/method list");

  // Canonical cell order: models and sizes as given, methods in enum order.
  auto methods = options.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  struct Task
  {
    std::size_t model_i, size_i;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < options.models.size(); ++mi)
    for (std::size_t si = 0; si < options.sizes.size(); ++si)
      for (int rep = 0; rep < options.reps; ++rep)
        tasks.push_back({ mi, si, rep });

  const std::size_t cells =
    options.models.size() * options.sizes.size() * methods.size();
  std::vector<std::vector<double>> results(
    cells, std::vector<double>(static_cast<std::size_t>(options.reps), 0.0));
  const auto cell_of = [&](std::size_t mi, std::size_t si, std::size_t meth) {
    return (mi * options.sizes.size() + si) * methods.size() + meth;
  };

  std::atomic<std::size_t> cursor{ 0 };
  std::atomic<bool> failed{ false };
  std::string failure_message;
  std::mutex failure_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t t = cursor.fetch_add(1);
      if (t >= tasks.size() || failed.load())
        return;
      const Task& task = tasks[t];
      const Model model = options.models[task.model_i];
      const std::size_t n = options.sizes[task.size_i];
      try {
        const std::uint64_t data_seed =
          mix_seed(options.base_seed,
                   { model_index(model), n, static_cast<std::uint64_t>(task.rep), 0 });
        const std::uint64_t noise_seed =
          mix_seed(options.base_seed,
                   { model_index(model), n, static_cast<std::uint64_t>(task.rep), 1 });
        Rng data_rng(data_seed);
        const auto data = model_sample(model, n, data_rng, options.model5_sigma);
        for (std::size_t meth = 0; meth < methods.size(); ++meth) {
          results[cell_of(task.model_i, task.size_i, meth)]
                 [static_cast<std::size_t>(task.rep)] =
            run_one_method(methods[meth], model, data, noise_seed, options);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        failure_message = e.what();
      }
    }
  };

  std::size_t jobs = options.jobs > 0
                       ? static_cast<std::size_t>(options.jobs)
                       : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, tasks.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i)
      pool.emplace_back(worker);
    for (auto& th : pool)
      th.join();
  }
  if (failed.load())
    throw std::runtime_error("run_benchmark: " + failure_message);

  const std::string fingerprint = make_fingerprint(options);
  std::vector<BenchmarkRecord> records;
  records.reserve(cells);
  for (std::size_t mi = 0; mi < options.models.size(); ++mi)
    for (std::size_t si = 0; si < options.sizes.size(); ++si)
      for (std::size_t meth = 0; meth < methods.size(); ++meth) {
        BenchmarkRecord rec;
        rec.model = options.models[mi];
        rec.n = options.sizes[si];
        rec.method = methods[meth];
        rec.replication_mises = results[cell_of(mi, si, meth)];
        const auto [med, mad] = median_mad(rec.replication_mises);
        rec.median = med;
        rec.mad = mad;
        rec.fingerprint = fingerprint;
        records.push_back(std::move(rec));
      }
  return records;
}

} // namespace shide
