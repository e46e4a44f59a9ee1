#pragma once

// Experiment harness: the grid risk metric, convergence-slope regression,
// seeded Monte Carlo studies with per-replicate substreams, and the refitted
// observable density built from an estimated mixing density.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nvmix/mellin.hpp"
#include "nvmix/models.hpp"
#include "nvmix/mu_estimator.hpp"

namespace nvmix {

// Root mean squared difference over a common grid.
double r_metric(const std::vector<double>& estimate, const std::vector<double>& truth);

// Same, with the truth evaluated as the mixing density on the estimate's grid.
double r_metric(const DensityEstimate& estimate, const MixingModel& truth);

// Least-squares slope of log rmse against log n. Needs at least three sizes,
// strictly positive rmse values, and non-constant sizes.
double fit_slope(const std::vector<double>& sizes, const std::vector<double>& rmse);

struct FiveNumber {
  double min = std::numeric_limits<double>::quiet_NaN();
  double q1 = std::numeric_limits<double>::quiet_NaN();
  double median = std::numeric_limits<double>::quiet_NaN();
  double q3 = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
};

// Type-7 interpolated quantile of an ascending vector.
double quantile_type7(const std::vector<double>& sorted_ascending, double p);

FiveNumber five_number(std::vector<double> values);

// Riemann-sum mixture of normal kernels over a uniform mixing grid:
// sum_k step * g_hat(s_k) * N(x; mu_hat * s_k, s_k). Negative g_hat values
// enter as-is. Throws if the grid is not uniform to within 1e-9 relative.
double refit_density(double x, double mu_hat, const DensityEstimate& g_hat);

// Refit on many points; normalized divides by the total carried mass
// step * sum_k g_hat(s_k) so the curve integrates to one.
std::vector<double> refit_curve(const std::vector<double>& xs, double mu_hat,
                                const DensityEstimate& g_hat, bool normalized = false);

enum class StudyTarget { mu, density_known_mu, density_plugin };

// How the estimator is configured at each sample size: a fixed configuration,
// the fixed small-contour tuning (gamma 0.1, u_max 7.6, v_max 0.9), or the
// rate-optimal rule u_max = n^{1/4}, v_max = kappa log n.
struct TuningRule {
  enum class Mode { fixed, paper, theory };

  Mode mode = Mode::paper;
  double gamma = 0.1;   // theory mode
  double kappa = 1.0;   // theory mode
  EstimatorConfig fixed_cfg{};

  static TuningRule fixed(const EstimatorConfig& cfg);
  static TuningRule paper();
  static TuningRule theory(double gamma, double kappa);

  EstimatorConfig resolve(std::size_t n) const;
};

struct MonteCarloStudy {
  MixtureModel model;
  std::vector<std::size_t> sample_sizes;  // strictly increasing
  std::size_t replicates = 1;
  std::uint64_t base_seed = 0;
  TuningRule tuning{};
  std::vector<double> grid;  // required for the density targets
  StudyTarget target = StudyTarget::mu;
  WeightFunction weight = WeightFunction::sine_window();
  double big_m = 10.0;
};

struct ReplicateRow {
  std::size_t n = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::string status;  // ok | no_bracket | error:<message>
  double mu_hat = std::numeric_limits<double>::quiet_NaN();
  double r_known = std::numeric_limits<double>::quiet_NaN();
  double r_plugin = std::numeric_limits<double>::quiet_NaN();
  bool bracket_found = false;
};

struct SizeSummary {
  std::size_t n = 0;
  std::size_t ok = 0;
  std::size_t failed = 0;
  FiveNumber metric{};  // target metric over the ok replicates
  double rmse_mu = std::numeric_limits<double>::quiet_NaN();
  double median_abs_err_mu = std::numeric_limits<double>::quiet_NaN();
};

struct StudyResult {
  std::vector<ReplicateRow> rows;  // raw per-replicate values
  std::vector<SizeSummary> summaries;
  double failure_rate = 0.0;
};

// Runs every (size, replicate) job on its own derived seed. Replicates are
// independent and merged by index, so the result is identical for any thread
// count and any execution order. Estimator failures inside a replicate are
// recorded in its status and excluded from the quantiles, never fatal.
StudyResult run_study(const MonteCarloStudy& study);

}  // namespace nvmix
