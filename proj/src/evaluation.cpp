#include "nvmix/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nvmix/rng.hpp"

namespace nvmix {

double r_metric(const std::vector<double>& estimate, const std::vector<double>& truth) {
  if (estimate.empty() || estimate.size() != truth.size())
    throw std::invalid_argument("r_metric: grids must be nonempty and equal length");
  double acc = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = estimate[i] - truth[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(estimate.size()));
}

double r_metric(const DensityEstimate& estimate, const MixingModel& truth) {
  std::vector<double> g(estimate.grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = truth.density(estimate.grid[i]);
  return r_metric(estimate.values, g);
}

double fit_slope(const std::vector<double>& sizes, const std::vector<double>& rmse) {
  if (sizes.size() < 3) throw std::invalid_argument("fit_slope: need at least three sizes");
  if (sizes.size() != rmse.size())
    throw std::invalid_argument("fit_slope: sizes and rmse lengths differ");
  std::vector<double> xs(sizes.size()), ys(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0)) throw std::invalid_argument("fit_slope: sizes must be positive");
    if (!(rmse[i] > 0.0) || !std::isfinite(rmse[i]))
      throw std::invalid_argument("fit_slope: rmse values must be positive and finite");
    xs[i] = std::log(sizes[i]);
    ys[i] = std::log(rmse[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_slope: sizes are constant");
  return sxy / sxx;
}

double quantile_type7(const std::vector<double>& sorted_ascending, double p) {
  if (sorted_ascending.empty()) throw std::invalid_argument("quantile_type7: empty input");
  const std::size_t n = sorted_ascending.size();
  if (n == 1) return sorted_ascending[0];
  const double h = p * static_cast<double>(n - 1);
  const double lo = std::floor(h);
  const std::size_t i = static_cast<std::size_t>(lo);
  if (i + 1 >= n) return sorted_ascending[n - 1];
  return sorted_ascending[i] + (h - lo) * (sorted_ascending[i + 1] - sorted_ascending[i]);
}

FiveNumber five_number(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("five_number: empty input");
  std::sort(values.begin(), values.end());
  FiveNumber f;
  f.min = values.front();
  f.q1 = quantile_type7(values, 0.25);
  f.median = quantile_type7(values, 0.50);
  f.q3 = quantile_type7(values, 0.75);
  f.max = values.back();
  return f;
}

namespace {

// Step of a uniform grid, validated to 1e-9 relative.
double uniform_step(const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("refit_density: need at least two grid points");
  const double step = grid[1] - grid[0];
  if (!(step > 0.0)) throw std::invalid_argument("refit_density: grid must be increasing");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = grid[i] - grid[i - 1];
    if (std::fabs(d - step) > 1e-9 * std::max(1.0, std::fabs(step)))
      throw std::invalid_argument("refit_density: grid must be uniform");
  }
  return step;
}

double normal_kernel(double x, double mean, double var) {
  constexpr double inv_sqrt_two_pi = 0.3989422804014326779;
  return inv_sqrt_two_pi / std::sqrt(var) * std::exp(-0.5 * (x - mean) * (x - mean) / var);
}

double refit_at(double x, double mu_hat, const std::vector<double>& grid,
                const std::vector<double>& g, double step) {
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = grid[k];
    acc += g[k] * normal_kernel(x, mu_hat * s, s);
  }
  return step * acc;
}

}  // namespace

double refit_density(double x, double mu_hat, const DensityEstimate& g_hat) {
  const double step = uniform_step(g_hat.grid);
  return refit_at(x, mu_hat, g_hat.grid, g_hat.values, step);
}

std::vector<double> refit_curve(const std::vector<double>& xs, double mu_hat,
                                const DensityEstimate& g_hat, bool normalized) {
  const double step = uniform_step(g_hat.grid);
  double scale = 1.0;
  if (normalized) {
    double mass = 0.0;
    for (double g : g_hat.values) mass += g;
    mass *= step;
    if (!(mass > 0.0))
      throw std::invalid_argument("refit_curve: cannot normalize, total mass is not positive");
    scale = 1.0 / mass;
  }
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = scale * refit_at(xs[i], mu_hat, g_hat.grid, g_hat.values, step);
  return out;
}

TuningRule TuningRule::fixed(const EstimatorConfig& cfg) {
  TuningRule t;
  t.mode = Mode::fixed;
  t.fixed_cfg = cfg;
  return t;
}

TuningRule TuningRule::paper() { return TuningRule{}; }

TuningRule TuningRule::theory(double gamma, double kappa) {
  TuningRule t;
  t.mode = Mode::theory;
  t.gamma = gamma;
  t.kappa = kappa;
  return t;
}

EstimatorConfig TuningRule::resolve(std::size_t n) const {
  switch (mode) {
    case Mode::fixed:
      return fixed_cfg;
    case Mode::paper:
      return EstimatorConfig::paper_tuning();
    case Mode::theory:
      return EstimatorConfig::theory_tuning(n, gamma, kappa);
  }
  throw std::logic_error("TuningRule::resolve: bad mode");
}

namespace {

ReplicateRow run_one(const MonteCarloStudy& study, const std::vector<double>& truth,
                     const EstimatorConfig& cfg, std::size_t n, std::size_t rep,
                     std::uint64_t seed) {
  ReplicateRow row;
  row.n = n;
  row.replicate = rep;
  row.seed = seed;
  try {
    RandomSource rng(seed);
    Sample s{study.model.sample(rng, n), ""};

    if (study.target == StudyTarget::mu || study.target == StudyTarget::density_plugin) {
      const MuEstimate fit = estimate_mu(s.values, study.weight, study.big_m);
      row.mu_hat = fit.value;
      row.bracket_found = fit.bracket_found;
      row.status = fit.bracket_found ? "ok" : "no_bracket";
    } else {
      row.status = "ok";
    }

    if (study.target != StudyTarget::mu) {
      const CharFunction cf = CharFunction::from_sample(s);
      const DensityEstimate known = estimate_density_known_mu(cf, study.model.mu, study.grid, cfg);
      row.r_known = r_metric(known.values, truth);
      if (study.target == StudyTarget::density_plugin) {
        const DensityEstimate plug = estimate_density_plugin(cf, row.mu_hat, study.grid, cfg);
        row.r_plugin = r_metric(plug.values, truth);
      }
    }
  } catch (const std::exception& e) {
    row.status = std::string("error:") + e.what();
  }
  return row;
}

}  // namespace

StudyResult run_study(const MonteCarloStudy& study) {
  if (study.replicates < 1) throw std::invalid_argument("run_study: replicates must be >= 1");
  if (study.sample_sizes.empty()) throw std::invalid_argument("run_study: no sample sizes");
  for (std::size_t i = 0; i < study.sample_sizes.size(); ++i) {
    if (study.sample_sizes[i] < 1)
      throw std::invalid_argument("run_study: sample sizes must be >= 1");
    if (i > 0 && study.sample_sizes[i] <= study.sample_sizes[i - 1])
      throw std::invalid_argument("run_study: sample sizes must be strictly increasing");
  }

  // Per-size configs and the truth on the grid are resolved up front; errors
  // here are configuration errors and abort the study.
  std::vector<EstimatorConfig> cfgs(study.sample_sizes.size());
  for (std::size_t i = 0; i < study.sample_sizes.size(); ++i) {
    cfgs[i] = study.tuning.resolve(study.sample_sizes[i]);
    cfgs[i].validate();
  }
  std::vector<double> truth;
  if (study.target != StudyTarget::mu) {
    if (study.grid.empty())
      throw std::invalid_argument("run_study: density targets need a nonempty grid");
    truth.resize(study.grid.size());
    for (std::size_t i = 0; i < study.grid.size(); ++i)
      truth[i] = study.model.mixing.density(study.grid[i]);
  }

  StudyResult result;
  const std::size_t jobs = study.sample_sizes.size() * study.replicates;
  result.rows.resize(jobs);

  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(jobs);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    const std::size_t si = static_cast<std::size_t>(j) / study.replicates;
    const std::size_t rep = static_cast<std::size_t>(j) % study.replicates;
    result.rows[static_cast<std::size_t>(j)] =
        run_one(study, truth, cfgs[si], study.sample_sizes[si], rep,
                substream_seed(study.base_seed, static_cast<std::uint64_t>(j)));
  }

  std::size_t failed_total = 0;
  result.summaries.resize(study.sample_sizes.size());
  for (std::size_t si = 0; si < study.sample_sizes.size(); ++si) {
    SizeSummary& sum = result.summaries[si];
    sum.n = study.sample_sizes[si];
    std::vector<double> metric, abs_err;
    double sq = 0.0;
    for (std::size_t rep = 0; rep < study.replicates; ++rep) {
      const ReplicateRow& row = result.rows[si * study.replicates + rep];
      if (row.status != "ok") {
        ++sum.failed;
        continue;
      }
      ++sum.ok;
      switch (study.target) {
        case StudyTarget::mu:
          metric.push_back(row.mu_hat);
          break;
        case StudyTarget::density_known_mu:
          metric.push_back(row.r_known);
          break;
        case StudyTarget::density_plugin:
          metric.push_back(row.r_plugin);
          break;
      }
      if (study.target != StudyTarget::density_known_mu) {
        const double err = row.mu_hat - study.model.mu;
        abs_err.push_back(std::fabs(err));
        sq += err * err;
      }
    }
    failed_total += sum.failed;
    if (!metric.empty()) sum.metric = five_number(std::move(metric));
    if (!abs_err.empty()) {
      sum.rmse_mu = std::sqrt(sq / static_cast<double>(abs_err.size()));
      std::sort(abs_err.begin(), abs_err.end());
      sum.median_abs_err_mu = quantile_type7(abs_err, 0.5);
    }
  }
  result.failure_rate = static_cast<double>(failed_total) / static_cast<double>(jobs);
  return result;
}

}  // namespace nvmix
