#pragma once

// Subcommand bodies behind the command-line front end. Each takes a plain
// options struct, performs the run, writes the requested outputs, and returns
// the JSON result envelope (also handy for in-process tests). Nothing here
// reads the clock or the system entropy pool; all randomness flows from the
// seed in the options.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "nvmix/evaluation.hpp"
#include "nvmix/mellin.hpp"
#include "nvmix/models.hpp"

namespace nvmix {

struct ModelOptions {
  std::string model = "gig";  // gig | gamma | beta | point
  double lambda = 1.0;        // gig order
  double delta = 1.0;         // gig scale
  double psi_gig = 1.0;       // gig rate-like parameter
  double a = 2.0;             // gamma shape / beta p / point atom
  double b = 1.0;             // gamma rate / beta q
  double mu = 0.0;            // drift of the observable
};

MixingModel make_mixing(const ModelOptions& opt);
MixtureModel make_mixture(const ModelOptions& opt);

struct TuningOptions {
  std::string tuning = "paper";  // paper | theory
  std::optional<double> kappa;   // required by theory
  std::optional<double> gamma;   // explicit overrides win over either rule
  std::optional<double> u_max;
  std::optional<double> v_max;
};

// Resolves the tuning rule at sample size n, then applies explicit overrides.
EstimatorConfig resolve_tuning(const TuningOptions& opt, std::size_t n);

struct GridOptions {
  double grid_min = 0.1;
  double grid_max = 8.0;
  double grid_step = 0.1;
};

struct SimulateOptions {
  ModelOptions model;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string output;  // *.csv writes a value table, otherwise JSON envelope
};

struct EstimateMuOptions {
  ModelOptions model;  // used only when input is empty
  std::string input;
  bool log_input = false;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string weight = "sine";
  double big_m = 10.0;
  std::string output;
};

struct EstimateDensityOptions {
  ModelOptions model;  // used only when input is empty
  std::string input;
  bool log_input = false;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::optional<double> known_mu;  // skip drift estimation when set
  TuningOptions tuning;
  GridOptions grid{0.1, 8.0, 0.1};
  std::string weight = "sine";
  double big_m = 10.0;
  std::string output;  // *.csv writes s,g_hat, otherwise JSON envelope
};

struct FitOptions {
  std::string input;  // required
  bool log_input = false;
  TuningOptions tuning;
  GridOptions grid{0.1, 8.0, 0.1};  // mixing grid for g_hat
  std::string weight = "sine";
  double big_m = 10.0;
  std::string output;  // JSON envelope only
};

struct StudyOptions {
  ModelOptions model;
  std::string sizes = "1000";  // comma-separated, strictly increasing
  std::size_t replicates = 10;
  std::uint64_t seed = 0;
  std::string target = "mu";  // mu | density-known | density-plugin
  TuningOptions tuning;
  GridOptions grid{0.1, 8.0, 0.1};
  std::string weight = "sine";
  double big_m = 10.0;
  std::string output;  // *.csv writes the replicate table, otherwise JSON
};

struct OracleCheckOptions {
  double shape = 2.0;  // gamma mixing for the noiseless pipeline
  double rate = 1.0;
  double mu = 0.0;
  TuningOptions tuning;               // defaults to gamma 0.3, u_max 50, v_max 5
  GridOptions grid{0.5, 4.0, 0.05};
  std::string output;
};

// Insertion-ordered JSON so envelopes list results in a stable, readable
// order (drift first, then grids).
using Envelope = nlohmann::ordered_json;

Envelope cmd_simulate(const SimulateOptions& opt);
Envelope cmd_estimate_mu(const EstimateMuOptions& opt);
Envelope cmd_estimate_density(const EstimateDensityOptions& opt);
Envelope cmd_fit(const FitOptions& opt);
Envelope cmd_study(const StudyOptions& opt);
Envelope cmd_oracle_check(const OracleCheckOptions& opt);

// Envelope to stdout when path is empty or "-", to the file otherwise.
void write_envelope(const Envelope& envelope, const std::string& path);

}  // namespace nvmix
