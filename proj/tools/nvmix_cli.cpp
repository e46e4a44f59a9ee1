// Command-line front end. Parsing errors exit 1, runtime failures exit 2,
// both with a machine-readable error object on stderr. No code path below
// reads the system clock or the OS entropy pool; reruns with the same flags
// produce identical bytes.

#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nvmix/cli_commands.hpp"

namespace {

void add_model_options(CLI::App* cmd, nvmix::ModelOptions& opt) {
  cmd->add_option("--model", opt.model, "Mixing family: gig, gamma, beta, point")
      ->capture_default_str();
  cmd->add_option("--lambda", opt.lambda, "GIG order")->capture_default_str();
  cmd->add_option("--delta", opt.delta, "GIG delta")->capture_default_str();
  cmd->add_option("--psi-gig", opt.psi_gig, "GIG psi parameter")->capture_default_str();
  cmd->add_option("--a", opt.a, "gamma shape / beta p / point atom")->capture_default_str();
  cmd->add_option("--b", opt.b, "gamma rate / beta q")->capture_default_str();
  cmd->add_option("--mu", opt.mu, "drift of the observable")->capture_default_str();
}

void add_tuning_options(CLI::App* cmd, nvmix::TuningOptions& opt) {
  cmd->add_option("--tuning", opt.tuning, "Tuning rule: paper or theory")
      ->capture_default_str();
  cmd->add_option("--kappa", opt.kappa, "v_max = kappa * log(n) under --tuning theory");
  cmd->add_option("--gamma", opt.gamma, "contour line Re z = gamma (overrides the rule)");
  cmd->add_option("--u-max", opt.u_max, "contour truncation (overrides the rule)");
  cmd->add_option("--v-max", opt.v_max, "inversion truncation (overrides the rule)");
}

void add_grid_options(CLI::App* cmd, nvmix::GridOptions& opt) {
  cmd->add_option("--grid-min", opt.grid_min, "first mixing grid point")->capture_default_str();
  cmd->add_option("--grid-max", opt.grid_max, "last mixing grid point")->capture_default_str();
  cmd->add_option("--grid-step", opt.grid_step, "mixing grid step")->capture_default_str();
}

int fail(const char* type, const std::string& message, int code) {
  nlohmann::ordered_json err;
  err["error"]["type"] = type;
  err["error"]["message"] = message;
  std::cerr << err.dump(2) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-step estimator for normal variance-mean mixtures: drift by root-finding "
               "on a weighted exponential transform, mixing density by Mellin inversion"};
  app.require_subcommand(1);

  nvmix::SimulateOptions sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Draw a seeded sample from a mixture model");
  add_model_options(c_sim, sim.model);
  c_sim->add_option("--n", sim.n, "sample size")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  c_sim->add_option("--output", sim.output, "output path (.csv for a value table)");

  nvmix::EstimateMuOptions emu;
  CLI::App* c_emu = app.add_subcommand("estimate-mu", "Estimate the drift from data");
  add_model_options(c_emu, emu.model);
  c_emu->add_option("--input", emu.input, "observation file (one value per line)");
  c_emu->add_flag("--log", emu.log_input, "log-transform the input values");
  c_emu->add_option("--n", emu.n, "sample size when simulating")->capture_default_str();
  c_emu->add_option("--seed", emu.seed, "RNG seed when simulating")->capture_default_str();
  c_emu->add_option("--weight", emu.weight, "weight function: sine")->capture_default_str();
  c_emu->add_option("--big-m", emu.big_m, "upper end of the bisection interval")
      ->capture_default_str();
  c_emu->add_option("--output", emu.output, "output path for the JSON envelope");

  nvmix::EstimateDensityOptions eden;
  CLI::App* c_eden =
      app.add_subcommand("estimate-density", "Estimate the mixing density from data");
  add_model_options(c_eden, eden.model);
  c_eden->add_option("--input", eden.input, "observation file (one value per line)");
  c_eden->add_flag("--log", eden.log_input, "log-transform the input values");
  c_eden->add_option("--n", eden.n, "sample size when simulating")->capture_default_str();
  c_eden->add_option("--seed", eden.seed, "RNG seed when simulating")->capture_default_str();
  c_eden->add_option("--known-mu", eden.known_mu, "use this drift instead of estimating it");
  add_tuning_options(c_eden, eden.tuning);
  add_grid_options(c_eden, eden.grid);
  c_eden->add_option("--weight", eden.weight, "weight function: sine")->capture_default_str();
  c_eden->add_option("--big-m", eden.big_m, "upper end of the bisection interval")
      ->capture_default_str();
  c_eden->add_option("--output", eden.output, "output path (.csv for an s,g_hat table)");

  nvmix::FitOptions fit;
  CLI::App* c_fit = app.add_subcommand(
      "fit", "Two-step fit: drift, mixing density, and refit observable density");
  c_fit->add_option("--input", fit.input, "observation file")->required();
  c_fit->add_flag("--log", fit.log_input, "log-transform the input values");
  add_tuning_options(c_fit, fit.tuning);
  add_grid_options(c_fit, fit.grid);
  c_fit->add_option("--weight", fit.weight, "weight function: sine")->capture_default_str();
  c_fit->add_option("--big-m", fit.big_m, "upper end of the bisection interval")
      ->capture_default_str();
  c_fit->add_option("--output", fit.output, "output path for the JSON envelope");

  nvmix::StudyOptions study;
  CLI::App* c_study = app.add_subcommand("study", "Seeded Monte Carlo study over sample sizes");
  add_model_options(c_study, study.model);
  c_study->add_option("--sizes", study.sizes, "comma-separated sample sizes, increasing")
      ->capture_default_str();
  c_study->add_option("--replicates", study.replicates, "replicates per size")
      ->capture_default_str();
  c_study->add_option("--seed", study.seed, "master seed")->capture_default_str();
  c_study->add_option("--target", study.target, "mu, density-known, or density-plugin")
      ->capture_default_str();
  add_tuning_options(c_study, study.tuning);
  add_grid_options(c_study, study.grid);
  c_study->add_option("--weight", study.weight, "weight function: sine")->capture_default_str();
  c_study->add_option("--big-m", study.big_m, "upper end of the bisection interval")
      ->capture_default_str();
  c_study->add_option("--output", study.output, "output path (.csv for the replicate table)");

  nvmix::OracleCheckOptions oracle;
  CLI::App* c_oracle = app.add_subcommand(
      "oracle-check", "Noiseless gamma-mixing pipeline; prints the max grid error");
  c_oracle->add_option("--a", oracle.shape, "gamma mixing shape")->capture_default_str();
  c_oracle->add_option("--b", oracle.rate, "gamma mixing rate")->capture_default_str();
  c_oracle->add_option("--mu", oracle.mu, "drift")->capture_default_str();
  add_tuning_options(c_oracle, oracle.tuning);
  add_grid_options(c_oracle, oracle.grid);
  c_oracle->add_option("--output", oracle.output, "output path for the JSON envelope");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    return fail("usage", e.what(), 1);
  }

  try {
    if (app.got_subcommand(c_sim)) nvmix::cmd_simulate(sim);
    else if (app.got_subcommand(c_emu)) nvmix::cmd_estimate_mu(emu);
    else if (app.got_subcommand(c_eden)) nvmix::cmd_estimate_density(eden);
    else if (app.got_subcommand(c_fit)) nvmix::cmd_fit(fit);
    else if (app.got_subcommand(c_study)) nvmix::cmd_study(study);
    else if (app.got_subcommand(c_oracle)) nvmix::cmd_oracle_check(oracle);
    return 0;
  } catch (const std::invalid_argument& e) {
    return fail("usage", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 2);
  }
}
