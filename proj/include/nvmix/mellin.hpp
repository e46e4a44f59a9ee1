#pragma once

// Nonparametric core: empirical characteristic function, the Mellin transform
// of the Laplace transform taken along the contour traced by the
// characteristic exponent, division by Gamma(1-z), and the truncated inverse
// Mellin transform that recovers the mixing density.

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nvmix/models.hpp"
#include "nvmix/mu_estimator.hpp"

namespace nvmix {

// Which kernel the contour integral uses: the integrand as written (plain), or
// with the characteristic function, exponent, and derivative all conjugated.
enum class KernelSide { plain, conjugated };

// psi(u) = -i mu u + u^2/2 and its derivative; Re psi(u) = u^2/2 >= 0, so
// principal-branch powers of psi(u) never cross the cut.
struct CharExponent {
  double mu = 0.0;

  cd operator()(double u) const { return cd(0.5 * u * u, -mu * u); }
  cd deriv(double u) const { return cd(u, -mu); }
};

// Empirical mean of e^{iuX}.
cd ecf(const std::vector<double>& values, double u);

class CharFunction {
 public:
  // Empirical variant; stores the data and its 0.99 quantile of |X| (the
  // oscillation scale that drives the u-mesh spacing).
  static CharFunction from_sample(const Sample& s);

  // Exact variant built from a model's closed-form characteristic function.
  static CharFunction exact(const MixtureModel& m);

  // Exact variant from a raw callable (for oracle constructions in tests).
  static CharFunction exact_fn(std::function<cd(double)> fn, std::string label);

  bool is_empirical() const { return empirical_; }
  const std::vector<double>& data() const;  // empirical only

  cd operator()(double u) const;

  // 0.99 quantile of |X| for empirical data, 0 for exact transforms.
  double oscillation_scale() const { return oscillation_scale_; }

  const std::string& tag() const { return tag_; }

 private:
  CharFunction() = default;

  bool empirical_ = false;
  std::vector<double> data_;
  std::function<cd(double)> fn_;
  double oscillation_scale_ = 0.0;
  std::string tag_;
};

struct EstimatorConfig {
  double gamma = 0.1;   // contour Re z = gamma, in (0, 1)
  double u_max = 7.6;   // contour truncation
  double v_max = 0.9;   // inversion truncation
  int u_nodes_per_unit = 64;
  int v_nodes_per_unit = 64;
  // Exponent of the graded first u-panel; values <= 0 select the automatic
  // rule matched to the strength of the u = 0 singularity.
  double singularity_grading_exponent = 0.0;

  static EstimatorConfig paper_tuning();  // gamma 0.1, u_max 7.6, v_max 0.9
  static EstimatorConfig theory_tuning(std::size_t n, double gamma, double kappa);

  // Throws std::invalid_argument on hard violations; returns warnings (e.g.
  // gamma above 1/2, where the risk guarantees no longer apply).
  std::vector<std::string> validate() const;
};

// Composite Gauss-Legendre mesh on [0, u_max]; panel width respects the
// empirical oscillation scale, and the first panel is graded toward 0.
struct UMesh {
  std::vector<double> nodes;
  std::vector<double> weights;
  double spacing = 0.0;
  int gl_order = 0;
};
UMesh build_u_mesh(const EstimatorConfig& cfg, double oscillation_scale, double mu);

// Symmetric mesh on [-v_max, v_max] with no node at 0; negative nodes mirror
// the positive ones exactly.
struct VMesh {
  std::vector<double> nodes;
  std::vector<double> weights;
};
VMesh build_v_mesh(const EstimatorConfig& cfg);

// Mellin transform of the Laplace transform, estimated along the contour.
// Branch rule: conjugated kernel when mu * Im(z) > 0, plain otherwise (in
// particular, plain everywhere when mu == 0). Requires 0 < Re z < 2.
cd mellin_of_laplace(const CharFunction& cf, const CharExponent& psi, cd z,
                     const EstimatorConfig& cfg);

// Same with the branch forced by the caller; mu == 0 admits no branch
// selection and throws std::invalid_argument.
cd mellin_of_laplace(const CharFunction& cf, const CharExponent& psi, cd z,
                     const EstimatorConfig& cfg, KernelSide side);

// Mellin transform of the mixing density: previous transform at 1-z divided
// by Gamma(1-z). Throws when 1-z is within 1e-8 of a nonpositive integer.
cd mellin_of_mixing_estimate(const CharFunction& cf, const CharExponent& psi, cd z,
                             const EstimatorConfig& cfg);

// Callable bundle of the estimated Mellin transform with its inputs.
struct MellinEstimate {
  CharFunction cf;
  CharExponent psi;
  EstimatorConfig config;

  cd operator()(cd z) const { return mellin_of_mixing_estimate(cf, psi, z, config); }
};

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> values;       // raw; negative values are not clamped
  double max_imag_residual = 0.0;   // largest dropped imaginary part
  std::string estimator_tag;        // known_mu | plugin_mu | oracle_cf
  EstimatorConfig config;
  double mu_used = 0.0;
  MuEstimate mu_fit{};              // populated on the plugin path
  std::vector<std::string> warnings;

  std::vector<double> nonnegative_view() const;  // max(value, 0) convenience
};

// Inverse-Mellin density estimate with the drift known exactly. The tag is
// oracle_cf when cf is exact, known_mu otherwise.
DensityEstimate estimate_density_known_mu(const CharFunction& cf, double mu,
                                          const std::vector<double>& grid,
                                          const EstimatorConfig& cfg);

// Same computation with an estimated drift plugged into the contour; tag
// plugin_mu. With mu_hat equal to the true drift this is bitwise identical to
// estimate_density_known_mu.
DensityEstimate estimate_density_plugin(const CharFunction& cf, double mu_hat,
                                        const std::vector<double>& grid,
                                        const EstimatorConfig& cfg);

// Two-step convenience: estimate the drift from the sample, then run the
// plugin estimator; records the drift fit in mu_fit.
DensityEstimate estimate_density_auto(const Sample& s, const std::vector<double>& grid,
                                      const EstimatorConfig& cfg, const WeightFunction& w,
                                      double big_m = 10.0);

// Equidistant grid lo, lo+step, ..., up to hi (inclusive within half a step).
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace nvmix
