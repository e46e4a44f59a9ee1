#include "nvmix/cli_commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "nvmix/io.hpp"
#include "nvmix/rng.hpp"

namespace nvmix {

namespace {

using J = Envelope;

bool is_csv_path(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

WeightFunction make_weight(const std::string& name) {
  if (name == "sine") return WeightFunction::sine_window();
  throw std::invalid_argument("unknown weight '" + name + "' (supported: sine)");
}

J model_json(const ModelOptions& opt) {
  J j;
  j["model"] = opt.model;
  if (opt.model == "gig") {
    j["lambda"] = opt.lambda;
    j["delta"] = opt.delta;
    j["psi_gig"] = opt.psi_gig;
  } else if (opt.model == "point") {
    j["a"] = opt.a;
  } else {
    j["a"] = opt.a;
    j["b"] = opt.b;
  }
  j["mu"] = opt.mu;
  return j;
}

J tuning_json(const EstimatorConfig& cfg) {
  J j;
  j["gamma"] = cfg.gamma;
  j["u_max"] = cfg.u_max;
  j["v_max"] = cfg.v_max;
  j["u_nodes_per_unit"] = cfg.u_nodes_per_unit;
  j["v_nodes_per_unit"] = cfg.v_nodes_per_unit;
  j["singularity_grading_exponent"] = cfg.singularity_grading_exponent;
  return j;
}

J grid_json(const GridOptions& g) {
  J j;
  j["grid_min"] = g.grid_min;
  j["grid_max"] = g.grid_max;
  j["grid_step"] = g.grid_step;
  return j;
}

J make_envelope(const std::string& command, J config, J outputs, J diagnostics) {
  J env;
  env["version"] = "1.0.0";
  env["command"] = command;
  env["config"] = std::move(config);
  env["outputs"] = std::move(outputs);
  env["diagnostics"] = std::move(diagnostics);
  return env;
}

// Observations either ingested from a file or simulated from the model
// options; the echo records which, with enough detail to reproduce the run.
Sample load_or_simulate(const ModelOptions& model, const std::string& input, bool log_input,
                        std::size_t n, std::uint64_t seed, J& echo) {
  if (!input.empty()) {
    echo["input"] = input;
    echo["log"] = log_input;
    Sample s = ingest_observations(input, log_input);
    echo["n"] = s.n();
    return s;
  }
  if (n < 1) throw std::invalid_argument("need --n >= 1 to simulate");
  echo["source"] = model_json(model);
  echo["n"] = n;
  echo["seed"] = seed;
  const MixtureModel m = make_mixture(model);
  RandomSource rng(seed);
  return Sample{m.sample(rng, n), m.describe()};
}

std::vector<std::size_t> parse_sizes(const std::string& spec) {
  std::vector<std::size_t> sizes;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t next = spec.find(',', pos);
    if (next == std::string::npos) next = spec.size();
    const std::string tok = spec.substr(pos, next - pos);
    std::size_t b = tok.find_first_not_of(" \t");
    std::size_t e = tok.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw std::invalid_argument("empty entry in --sizes '" + spec + "'");
    unsigned long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data() + b, tok.data() + e + 1, v);
    if (ec != std::errc() || ptr != tok.data() + e + 1)
      throw std::invalid_argument("cannot parse size '" + tok + "' in --sizes");
    sizes.push_back(static_cast<std::size_t>(v));
    pos = next + 1;
    if (next == spec.size()) break;
  }
  if (sizes.empty()) throw std::invalid_argument("--sizes is empty");
  return sizes;
}

}  // namespace

MixingModel make_mixing(const ModelOptions& opt) {
  if (opt.model == "gig") return MixingModel::gig_model(GigParams{opt.lambda, opt.delta, opt.psi_gig});
  if (opt.model == "gamma") return MixingModel::gamma_model(opt.a, opt.b);
  if (opt.model == "beta") return MixingModel::beta_model(opt.a, opt.b);
  if (opt.model == "point") return MixingModel::point_mass(opt.a);
  throw std::invalid_argument("unknown model '" + opt.model +
                              "' (supported: gig, gamma, beta, point)");
}

MixtureModel make_mixture(const ModelOptions& opt) {
  return MixtureModel{opt.mu, make_mixing(opt)};
}

EstimatorConfig resolve_tuning(const TuningOptions& opt, std::size_t n) {
  EstimatorConfig cfg;
  if (opt.tuning == "paper") {
    cfg = EstimatorConfig::paper_tuning();
  } else if (opt.tuning == "theory") {
    if (!opt.kappa) throw std::invalid_argument("--tuning theory requires --kappa");
    cfg = EstimatorConfig::theory_tuning(n, opt.gamma.value_or(0.1), *opt.kappa);
  } else {
    throw std::invalid_argument("unknown tuning '" + opt.tuning + "' (supported: paper, theory)");
  }
  if (opt.gamma) cfg.gamma = *opt.gamma;
  if (opt.u_max) cfg.u_max = *opt.u_max;
  if (opt.v_max) cfg.v_max = *opt.v_max;
  return cfg;
}

void write_envelope(const Envelope& envelope, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << envelope.dump(2) << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << envelope.dump(2) << '\n';
  out.flush();
  if (out.fail()) throw std::runtime_error("failed writing " + path);
}

Envelope cmd_simulate(const SimulateOptions& opt) {
  if (opt.n < 1) throw std::invalid_argument("simulate needs --n >= 1");
  const MixtureModel m = make_mixture(opt.model);
  RandomSource rng(opt.seed);
  const std::vector<double> values = m.sample(rng, opt.n);

  J config;
  config["model"] = model_json(opt.model);
  config["n"] = opt.n;
  config["seed"] = opt.seed;
  config["output"] = opt.output;

  J outputs;
  outputs["n"] = values.size();
  if (is_csv_path(opt.output)) {
    std::vector<std::vector<std::string>> rows(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) rows[i] = {format_double(values[i])};
    write_csv(opt.output, {"value"}, rows);
    outputs["written_to"] = opt.output;
  } else {
    outputs["values"] = values;
  }

  J env = make_envelope("simulate", std::move(config), std::move(outputs), J::object());
  write_envelope(env, is_csv_path(opt.output) ? "-" : opt.output);
  return env;
}

Envelope cmd_estimate_mu(const EstimateMuOptions& opt) {
  J config;
  const Sample s = load_or_simulate(opt.model, opt.input, opt.log_input, opt.n, opt.seed, config);
  config["weight"] = opt.weight;
  config["big_m"] = opt.big_m;

  const MuEstimate fit = estimate_mu(s.values, make_weight(opt.weight), opt.big_m);

  J outputs;
  outputs["mu_hat"] = fit.value;
  outputs["bracket_found"] = fit.bracket_found;
  outputs["iterations"] = fit.iterations;
  outputs["w_n_at_zero"] = fit.w_n_at_zero;

  J diagnostics;
  diagnostics["n"] = s.n();
  if (!fit.bracket_found)
    diagnostics["warnings"] = J::array({"no sign change on [0, big_m]; estimate clamped"});

  J env = make_envelope("estimate-mu", std::move(config), std::move(outputs), std::move(diagnostics));
  write_envelope(env, opt.output);
  return env;
}

Envelope cmd_estimate_density(const EstimateDensityOptions& opt) {
  J config;
  const Sample s = load_or_simulate(opt.model, opt.input, opt.log_input, opt.n, opt.seed, config);
  const EstimatorConfig cfg = resolve_tuning(opt.tuning, s.n());
  const std::vector<double> grid = make_grid(opt.grid.grid_min, opt.grid.grid_max, opt.grid.grid_step);
  config["tuning"] = tuning_json(cfg);
  config["grid"] = grid_json(opt.grid);
  config["weight"] = opt.weight;
  config["big_m"] = opt.big_m;
  if (opt.known_mu) config["known_mu"] = *opt.known_mu;

  DensityEstimate est;
  if (opt.known_mu) {
    est = estimate_density_known_mu(CharFunction::from_sample(s), *opt.known_mu, grid, cfg);
  } else {
    est = estimate_density_auto(s, grid, cfg, make_weight(opt.weight), opt.big_m);
  }

  J outputs;
  outputs["estimator_tag"] = est.estimator_tag;
  outputs["mu_used"] = est.mu_used;
  if (!opt.known_mu) {
    J fit;
    fit["mu_hat"] = est.mu_fit.value;
    fit["bracket_found"] = est.mu_fit.bracket_found;
    fit["iterations"] = est.mu_fit.iterations;
    outputs["mu_fit"] = std::move(fit);
  }
  if (is_csv_path(opt.output)) {
    std::vector<std::vector<std::string>> rows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      rows[i] = {format_double(grid[i]), format_double(est.values[i])};
    write_csv(opt.output, {"s", "g_hat"}, rows);
    outputs["written_to"] = opt.output;
  } else {
    outputs["grid"] = est.grid;
    outputs["g_hat"] = est.values;
  }

  J diagnostics;
  diagnostics["max_imag_residual"] = est.max_imag_residual;
  diagnostics["warnings"] = est.warnings;

  J env = make_envelope("estimate-density", std::move(config), std::move(outputs),
                        std::move(diagnostics));
  write_envelope(env, is_csv_path(opt.output) ? "-" : opt.output);
  return env;
}

Envelope cmd_fit(const FitOptions& opt) {
  if (opt.input.empty()) throw std::invalid_argument("fit requires --input");
  if (is_csv_path(opt.output))
    throw std::invalid_argument("fit emits a JSON envelope; use a non-.csv output path");

  J config;
  config["input"] = opt.input;
  config["log"] = opt.log_input;
  const Sample s = ingest_observations(opt.input, opt.log_input);
  config["n"] = s.n();
  const EstimatorConfig cfg = resolve_tuning(opt.tuning, s.n());
  config["tuning"] = tuning_json(cfg);
  config["grid"] = grid_json(opt.grid);
  config["weight"] = opt.weight;
  config["big_m"] = opt.big_m;

  // Step one: drift. Step two: mixing density on the s grid with the drift
  // plugged in. Then the observable density refit on a padded data range.
  const std::vector<double> g_grid =
      make_grid(opt.grid.grid_min, opt.grid.grid_max, opt.grid.grid_step);
  const DensityEstimate g =
      estimate_density_auto(s, g_grid, cfg, make_weight(opt.weight), opt.big_m);

  const auto [lo_it, hi_it] = std::minmax_element(s.values.begin(), s.values.end());
  const std::vector<double> x_grid = make_grid(*lo_it - 0.5, *hi_it + 0.5, 0.05);
  const std::vector<double> p = refit_curve(x_grid, g.mu_used, g);

  J outputs;
  outputs["mu_hat"] = g.mu_fit.value;
  outputs["bracket_found"] = g.mu_fit.bracket_found;
  outputs["iterations"] = g.mu_fit.iterations;
  outputs["g_grid"] = g.grid;
  outputs["g_hat"] = g.values;
  outputs["p_grid"] = x_grid;
  outputs["p_hat"] = p;

  J diagnostics;
  diagnostics["n"] = s.n();
  diagnostics["max_imag_residual"] = g.max_imag_residual;
  diagnostics["warnings"] = g.warnings;

  J env = make_envelope("fit", std::move(config), std::move(outputs), std::move(diagnostics));
  write_envelope(env, opt.output);
  return env;
}

namespace {

StudyTarget parse_target(const std::string& name) {
  if (name == "mu") return StudyTarget::mu;
  if (name == "density-known") return StudyTarget::density_known_mu;
  if (name == "density-plugin") return StudyTarget::density_plugin;
  throw std::invalid_argument("unknown target '" + name +
                              "' (supported: mu, density-known, density-plugin)");
}

TuningRule study_tuning(const TuningOptions& opt) {
  if (opt.tuning == "theory") {
    if (opt.u_max || opt.v_max)
      throw std::invalid_argument(
          "--u-max/--v-max overrides contradict --tuning theory, which sets them per sample "
          "size");
    if (!opt.kappa) throw std::invalid_argument("--tuning theory requires --kappa");
    return TuningRule::theory(opt.gamma.value_or(0.1), *opt.kappa);
  }
  // The fixed-contour rule has no sample-size dependence, so explicit
  // overrides collapse to a fixed configuration.
  return TuningRule::fixed(resolve_tuning(opt, 2));
}

std::string row_status_csv(const ReplicateRow& row) { return row.status; }

}  // namespace

Envelope cmd_study(const StudyOptions& opt) {
  MonteCarloStudy study{make_mixture(opt.model),
                        parse_sizes(opt.sizes),
                        opt.replicates,
                        opt.seed,
                        study_tuning(opt.tuning),
                        {},
                        parse_target(opt.target),
                        make_weight(opt.weight),
                        opt.big_m};
  if (study.target != StudyTarget::mu)
    study.grid = make_grid(opt.grid.grid_min, opt.grid.grid_max, opt.grid.grid_step);

  J config;
  config["model"] = model_json(opt.model);
  config["sizes"] = study.sample_sizes;
  config["replicates"] = opt.replicates;
  config["seed"] = opt.seed;
  config["target"] = opt.target;
  config["tuning"]["mode"] = opt.tuning.tuning;
  if (opt.tuning.kappa) config["tuning"]["kappa"] = *opt.tuning.kappa;
  for (std::size_t i = 0; i < study.sample_sizes.size(); ++i)
    config["tuning"]["resolved"].push_back(tuning_json(study.tuning.resolve(study.sample_sizes[i])));
  if (study.target != StudyTarget::mu) config["grid"] = grid_json(opt.grid);
  config["weight"] = opt.weight;
  config["big_m"] = opt.big_m;

  const StudyResult result = run_study(study);

  J outputs;
  if (is_csv_path(opt.output)) {
    std::vector<std::vector<std::string>> rows(result.rows.size());
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const ReplicateRow& r = result.rows[i];
      rows[i] = {std::to_string(r.n),          std::to_string(r.replicate),
                 std::to_string(r.seed),       row_status_csv(r),
                 format_double(r.mu_hat),      format_double(r.r_known),
                 format_double(r.r_plugin),    r.bracket_found ? "true" : "false"};
    }
    write_csv(opt.output,
              {"n", "replicate", "seed", "status", "mu_hat", "r_known", "r_plugin",
               "bracket_found"},
              rows);
    outputs["written_to"] = opt.output;
  } else {
    J rows = J::array();
    for (const ReplicateRow& r : result.rows) {
      J row;
      row["n"] = r.n;
      row["replicate"] = r.replicate;
      row["seed"] = r.seed;
      row["status"] = r.status;
      row["mu_hat"] = r.mu_hat;
      row["r_known"] = r.r_known;
      row["r_plugin"] = r.r_plugin;
      row["bracket_found"] = r.bracket_found;
      rows.push_back(std::move(row));
    }
    outputs["rows"] = std::move(rows);
  }
  J summaries = J::array();
  for (const SizeSummary& s : result.summaries) {
    J sum;
    sum["n"] = s.n;
    sum["ok"] = s.ok;
    sum["failed"] = s.failed;
    sum["metric"]["min"] = s.metric.min;
    sum["metric"]["q1"] = s.metric.q1;
    sum["metric"]["median"] = s.metric.median;
    sum["metric"]["q3"] = s.metric.q3;
    sum["metric"]["max"] = s.metric.max;
    sum["rmse_mu"] = s.rmse_mu;
    sum["median_abs_err_mu"] = s.median_abs_err_mu;
    summaries.push_back(std::move(sum));
  }
  outputs["summaries"] = std::move(summaries);

  J diagnostics;
  diagnostics["failure_rate"] = result.failure_rate;

  J env = make_envelope("study", std::move(config), std::move(outputs), std::move(diagnostics));
  write_envelope(env, is_csv_path(opt.output) ? "-" : opt.output);
  return env;
}

Envelope cmd_oracle_check(const OracleCheckOptions& opt) {
  EstimatorConfig cfg;
  cfg.gamma = opt.tuning.gamma.value_or(0.3);
  cfg.u_max = opt.tuning.u_max.value_or(50.0);
  cfg.v_max = opt.tuning.v_max.value_or(5.0);

  const MixingModel mixing = MixingModel::gamma_model(opt.shape, opt.rate);
  const MixtureModel mixture{opt.mu, mixing};
  const CharFunction cf = CharFunction::exact(mixture);
  const std::vector<double> grid =
      make_grid(opt.grid.grid_min, opt.grid.grid_max, opt.grid.grid_step);

  const DensityEstimate est = estimate_density_known_mu(cf, opt.mu, grid, cfg);
  double max_err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    max_err = std::max(max_err, std::fabs(est.values[i] - mixing.density(grid[i])));

  const cd mellin_hat = mellin_of_mixing_estimate(cf, CharExponent{opt.mu}, cd(cfg.gamma, 0.0), cfg);
  const cd mellin_exact = mixing.exact_mellin(cd(cfg.gamma, 0.0));

  J config;
  config["model"] = "gamma";
  config["a"] = opt.shape;
  config["b"] = opt.rate;
  config["mu"] = opt.mu;
  config["tuning"] = tuning_json(cfg);
  config["grid"] = grid_json(opt.grid);

  J outputs;
  outputs["max_grid_error"] = max_err;
  outputs["mellin_at_gamma"]["z"] = cfg.gamma;
  outputs["mellin_at_gamma"]["estimate_re"] = mellin_hat.real();
  outputs["mellin_at_gamma"]["estimate_im"] = mellin_hat.imag();
  outputs["mellin_at_gamma"]["exact_re"] = mellin_exact.real();
  outputs["mellin_at_gamma"]["exact_im"] = mellin_exact.imag();
  outputs["mellin_at_gamma"]["abs_error"] = std::abs(mellin_hat - mellin_exact);

  J diagnostics;
  diagnostics["max_imag_residual"] = est.max_imag_residual;
  diagnostics["warnings"] = est.warnings;

  J env = make_envelope("oracle-check", std::move(config), std::move(outputs),
                        std::move(diagnostics));
  if (!opt.output.empty() && opt.output != "-")
    std::printf("max grid error = %.6g\n", max_err);
  write_envelope(env, opt.output);
  return env;
}

}  // namespace nvmix
