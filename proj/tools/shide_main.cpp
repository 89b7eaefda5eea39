// Command-line front end: density estimation, baseline KDEs, model
// sampling and the replicated benchmark, with deterministic CSV output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "shide/baseline.hpp"
#include "shide/bench.hpp"
#include "shide/csv.hpp"
#include "shide/estimator.hpp"
#include "shide/stats.hpp"

namespace {

using namespace shide;

struct SharedFlags
{
  std::string input = "-";
  std::string output;
  std::uint64_t seed = 0;
  int grid = 512;
};

void add_shared(CLI::App* cmd, SharedFlags& shared, bool needs_input)
{
  if (needs_input)
    cmd->add_option("--input", shared.input, "input data file, or - for stdin")
      ->capture_default_str();
  cmd->add_option("--output", shared.output,
                  "output CSV path (stdout when omitted)");
  cmd->add_option("--seed", shared.seed, "random seed")->capture_default_str();
  cmd->add_option("--grid", shared.grid, "evaluation grid points")
    ->capture_default_str()
    ->check(CLI::Range(2, 1 << 22));
}

std::vector<double> load_input(const std::string& input)
{
  if (input == "-")
    return io::read_data(std::cin, "stdin");
  return io::read_data_file(input);
}

void emit(const SharedFlags& shared, const std::string& content)
{
  if (shared.output.empty())
    std::cout << content;
  else
    io::atomic_write_file(shared.output, content);
}

std::string density_csv(const std::vector<double>& grid,
                        const std::vector<double>& density)
{
  std::string out = "x,density\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += io::format_g17(grid[i]);
    out += ',';
    out += io::format_g17(density[i]);
    out += '\n';
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, int g)
{
  std::vector<double> grid(static_cast<std::size_t>(g));
  const double step = (hi - lo) / static_cast<double>(g - 1);
  for (int i = 0; i < g; ++i)
    grid[static_cast<std::size_t>(i)] = lo + step * i;
  return grid;
}

Model parse_model(const std::string& token)
{
  std::string t;
  for (char c : token)
    t += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (t == "I")
    return Model::I;
  if (t == "II")
    return Model::II;
  if (t == "III")
    return Model::III;
  if (t == "IV")
    return Model::IV;
  if (t == "V")
    return Model::V;
  throw CLI::ValidationError("--models", "unknown model: " + token);
}

std::vector<std::string> split_list(const std::string& list)
{
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(list);
  while (std::getline(in, tok, ','))
    if (!tok.empty())
      out.push_back(tok);
  return out;
}

double parse_float(const std::string& text, const std::string& flag)
{
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || !std::isfinite(v))
    throw CLI::ValidationError(flag, "not a number: " + text);
  return v;
}

// ---------------------------------------------------------------- estimate

struct EstimateFlags
{
  SharedFlags shared;
  std::string method = "shide";
  std::string bandwidth;
  double alpha = 0.5;
  int k = 3;
  int m = 10;
  double c = 1.0;
  double lower = 0.0, upper = 0.0;
  bool has_lower = false, has_upper = false;
  bool normalize = false;
  std::string roughness = "exact";
  std::string working_scale = "original";
};

int run_estimate(const EstimateFlags& f)
{
  const auto data = load_input(f.shared.input);

  if (f.method == "shide") {
    ShideConfig config;
    config.k = f.k;
    config.m = f.m;
    config.seed = f.shared.seed;
    config.normalize = f.normalize;
    config.grid_points = f.shared.grid;
    config.working_scale = f.working_scale == "transformed"
                             ? WorkingScale::Transformed
                             : WorkingScale::Original;
    if (f.has_lower && f.has_upper)
      config.support = SupportSpec::interval(f.lower, f.upper);
    else if (f.has_lower)
      config.support = SupportSpec::lower_bounded(f.lower);
    else if (f.has_upper)
      config.support = SupportSpec::upper_bounded(f.upper);

    if (f.bandwidth.empty() || f.bandwidth == "opt")
      config.bandwidth = BandwidthSpec::amise_opt();
    else if (f.bandwidth == "perc")
      config.bandwidth = BandwidthSpec::percentile(f.alpha, true);
    else
      config.bandwidth = BandwidthSpec::fixed(parse_float(f.bandwidth, "--bandwidth"));
    config.bandwidth.c = f.c;
    config.bandwidth.alpha = f.alpha;
    config.bandwidth.roughness_method =
      f.roughness == "paper" ? RoughnessMethod::Paper : RoughnessMethod::Exact;

    const auto est = shide_estimate(data, config);
    const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
    const auto grid =
      make_grid(*lo_it - 3.0 * est.h_used, *hi_it + 3.0 * est.h_used, f.shared.grid);
    std::vector<double> density(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      density[i] = evaluate_density(est, grid[i]);
    emit(f.shared, density_csv(grid, density));
    if (est.h_clamped)
      std::cerr << "warning: selected bandwidth clamped to the data range\n";
    std::cerr << "method=shide h=" << io::format_g17(est.h_used)
              << " theta=" << io::format_g17(est.theta_used) << " B=" << est.bins
              << " seed=" << f.shared.seed << "\n";
    return 0;
  }

  if (f.has_lower || f.has_upper)
    throw CLI::ValidationError("--lower/--upper apply to --method shide only");
  if (f.normalize)
    throw CLI::ValidationError("--normalize applies to --method shide only");
  if (f.bandwidth == "opt" || f.bandwidth == "perc")
    throw CLI::ValidationError("selector '" + f.bandwidth +
                               "' applies to --method shide only");

  const double h =
    f.bandwidth.empty() ? silverman_bw(data) : parse_float(f.bandwidth, "--bandwidth");
  const bool multiplicative = f.method == "mkde";
  const KdeEstimate est(data, h,
                        multiplicative ? KdeMode::Multiplicative : KdeMode::Additive);
  const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
  const auto grid = make_grid(*lo_it - 3.0 * h, *hi_it + 3.0 * h, f.shared.grid);
  std::vector<double> density(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    density[i] =
      multiplicative ? mkde_evaluate(est, grid[i]) : kde_evaluate(est, grid[i]);
  emit(f.shared, density_csv(grid, density));
  std::cerr << "method=" << f.method << " h=" << io::format_g17(h)
            << " seed=" << f.shared.seed << "\n";
  return 0;
}

// --------------------------------------------------------------------- kde

int run_kde(const SharedFlags& shared, const std::string& bw)
{
  const auto data = load_input(shared.input);
  double h;
  bool fell_back = false;
  if (bw == "sj")
    h = sj_bw(data, &fell_back);
  else if (bw == "silverman")
    h = silverman_bw(data);
  else
    h = parse_float(bw, "--bw");
  if (fell_back)
    std::cerr << "warning: SJ bracket holds no root; using the Silverman bandwidth\n";
  const KdeEstimate est(data, h, KdeMode::Additive);
  const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
  const auto grid = make_grid(*lo_it - 3.0 * h, *hi_it + 3.0 * h, shared.grid);
  std::vector<double> density(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    density[i] = kde_evaluate(est, grid[i]);
  emit(shared, density_csv(grid, density));
  std::cerr << "method=kde bw=" << bw << " h=" << io::format_g17(h)
            << " seed=" << shared.seed << "\n";
  return 0;
}

// ------------------------------------------------------------------ sample

int run_sample(const SharedFlags& shared, const std::string& model_token,
               std::size_t n, double model5_sigma)
{
  const Model model = parse_model(model_token);
  if (n < 1)
    throw CLI::ValidationError("--n", "need n >= 1");
  Rng rng(shared.seed);
  const auto draws = model_sample(model, n, rng, model5_sigma);
  std::string out;
  for (double v : draws) {
    out += io::format_g17(v);
    out += '\n';
  }
  emit(shared, out);
  return 0;
}

// ------------------------------------------------------------------- bench

const char* method_column(BenchMethod m)
{
  return m == BenchMethod::KdeSj ? "kde" : "shide";
}

const char* selector_column(BenchMethod m)
{
  switch (m) {
    case BenchMethod::KdeSj:
      return "sj";
    case BenchMethod::ShideOpt:
      return "opt";
    case BenchMethod::ShidePerc:
      return "perc";
  }
  return "?";
}

int run_bench(const SharedFlags& shared, const std::string& models,
              const std::string& sizes, int reps, const std::string& methods,
              int jobs, double model5_sigma, const std::string& summary_path)
{
  BenchmarkOptions opt;
  opt.models.clear();
  for (const auto& tok : split_list(models))
    opt.models.push_back(parse_model(tok));
  std::sort(opt.models.begin(), opt.models.end());
  opt.models.erase(std::unique(opt.models.begin(), opt.models.end()),
                   opt.models.end());

  opt.sizes.clear();
  for (const auto& tok : split_list(sizes)) {
    const long long v = std::stoll(tok);
    if (v < 2)
      throw CLI::ValidationError("--n", "sample sizes must be >= 2");
    opt.sizes.push_back(static_cast<std::size_t>(v));
  }
  std::sort(opt.sizes.begin(), opt.sizes.end());
  opt.sizes.erase(std::unique(opt.sizes.begin(), opt.sizes.end()), opt.sizes.end());

  opt.methods.clear();
  for (auto tok : split_list(methods)) {
    std::transform(tok.begin(), tok.end(), tok.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (tok == "kde_sj")
      opt.methods.push_back(BenchMethod::KdeSj);
    else if (tok == "shide_opt")
      opt.methods.push_back(BenchMethod::ShideOpt);
    else if (tok == "shide_perc")
      opt.methods.push_back(BenchMethod::ShidePerc);
    else
      throw CLI::ValidationError("--methods", "unknown method: " + tok);
  }

  opt.reps = reps;
  opt.base_seed = shared.seed;
  opt.jobs = jobs;
  opt.model5_sigma = model5_sigma;
  opt.grid_points = shared.grid;

  const auto records = run_benchmark(opt);

  std::string detail = "# " + records.front().fingerprint + "\n";
  detail += "model,n,method,selector,rep,mise\n";
  std::string summary = "# " + records.front().fingerprint + "\n";
  summary += "model,n,method,selector,median,mad\n";
  for (const auto& rec : records) {
    const std::string prefix = std::string(model_name(rec.model)) + "," +
                               std::to_string(rec.n) + "," +
                               method_column(rec.method) + "," +
                               selector_column(rec.method);
    for (std::size_t rep = 0; rep < rec.replication_mises.size(); ++rep) {
      detail += prefix;
      detail += ',';
      detail += std::to_string(rep);
      detail += ',';
      detail += io::format_g17(rec.replication_mises[rep]);
      detail += '\n';
    }
    summary += prefix + "," + io::format_g17(rec.median) + "," +
               io::format_g17(rec.mad) + "\n";
  }

  if (shared.output.empty()) {
    std::cout << detail << summary;
  } else {
    std::string spath = summary_path;
    if (spath.empty()) {
      spath = shared.output;
      const auto pos = spath.rfind(".csv");
      if (pos != std::string::npos && pos == spath.size() - 4)
        spath.insert(pos, ".summary");
      else
        spath += ".summary.csv";
    }
    io::atomic_write_file(shared.output, detail);
    io::atomic_write_file(spath, summary);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "SHIDE density estimation toolkit" };
  app.require_subcommand(1);

  // estimate
  EstimateFlags ef;
  auto* est = app.add_subcommand("estimate", "fit a density estimate and emit x,density CSV");
  add_shared(est, ef.shared, true);
  est->add_option("--method", ef.method, "shide|kde|mkde")
    ->capture_default_str()
    ->check(CLI::IsMember({ "shide", "kde", "mkde" }));
  est->add_option("--bandwidth", ef.bandwidth,
                  "opt|perc|FLOAT (default: opt for shide, silverman otherwise)");
  est->add_option("--alpha", ef.alpha, "percentile level")->capture_default_str();
  est->add_option("--k", ef.k, "kernel order")->capture_default_str();
  est->add_option("--m", ef.m, "pseudo-replicates per observation")
    ->capture_default_str();
  est->add_option("--c", ef.c, "coupling constant")->capture_default_str();
  auto* lo = est->add_option("--lower", ef.lower, "lower support bound");
  auto* up = est->add_option("--upper", ef.upper, "upper support bound");
  est->add_flag("--normalize", ef.normalize, "rescale the estimate to unit mass");
  est->add_option("--roughness", ef.roughness, "R(K) formula: paper|exact")
    ->capture_default_str()
    ->check(CLI::IsMember({ "paper", "exact" }));
  est->add_option("--working-scale", ef.working_scale,
                  "histogram scale for bounded supports: original|transformed")
    ->capture_default_str()
    ->check(CLI::IsMember({ "original", "transformed" }));

  // kde
  SharedFlags kf;
  std::string kde_bw = "sj";
  auto* kde = app.add_subcommand("kde", "classical Gaussian KDE baseline");
  add_shared(kde, kf, true);
  kde->add_option("--bw", kde_bw, "sj|silverman|FLOAT")->capture_default_str();

  // sample
  SharedFlags sf;
  std::string sample_model;
  std::size_t sample_n = 0;
  double sample_sigma = 3.0;
  auto* smp = app.add_subcommand("sample", "draw from a simulation model");
  add_shared(smp, sf, false);
  smp->add_option("--model", sample_model, "model id: I|II|III|IV|V")->required();
  smp->add_option("--n", sample_n, "number of draws")->required();
  smp->add_option("--model5-sigma", sample_sigma, "sigma of the truncated normal")
    ->capture_default_str();

  // bench
  SharedFlags bf;
  std::string bench_models = "I,II,III,IV,V";
  std::string bench_sizes = "50,500";
  std::string bench_methods = "kde_sj,shide_opt,shide_perc";
  std::string bench_summary;
  int bench_reps = 300;
  int bench_jobs = 0;
  double bench_sigma = 3.0;
  auto* ben = app.add_subcommand("bench", "replicated MISE benchmark");
  add_shared(ben, bf, false);
  ben->add_option("--models", bench_models, "comma list of models")
    ->capture_default_str();
  ben->add_option("--n", bench_sizes, "comma list of sample sizes")
    ->capture_default_str();
  ben->add_option("--reps", bench_reps, "replications per cell")
    ->capture_default_str()
    ->check(CLI::PositiveNumber);
  ben->add_option("--methods", bench_methods, "comma list of methods")
    ->capture_default_str();
  ben->add_option("--jobs", bench_jobs, "worker threads (0 = all cores)")
    ->capture_default_str();
  ben->add_option("--model5-sigma", bench_sigma, "sigma of the truncated normal")
    ->capture_default_str();
  ben->add_option("--summary", bench_summary,
                  "summary CSV path (default: derived from --output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) {
      ef.has_lower = lo->count() > 0;
      ef.has_upper = up->count() > 0;
      return run_estimate(ef);
    }
    if (kde->parsed())
      return run_kde(kf, kde_bw);
    if (smp->parsed())
      return run_sample(sf, sample_model, sample_n, sample_sigma);
    if (ben->parsed())
      return run_bench(bf, bench_models, bench_sizes, bench_reps, bench_methods,
                       bench_jobs, bench_sigma, bench_summary);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
