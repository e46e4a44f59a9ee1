#include "nvmix/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "nvmix/complex_special.hpp"
#include "nvmix/kernels.hpp"
#include "nvmix/quadrature.hpp"

namespace nvmix {

namespace {

// Type-7 quantile of a sorted ascending vector, matching the evaluation
// module's five-number summaries.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const double lo = std::floor(h);
  const std::size_t i = static_cast<std::size_t>(lo);
  if (i + 1 >= n) return sorted[n - 1];
  return sorted[i] + (h - lo) * (sorted[i + 1] - sorted[i]);
}

}  // namespace

cd ecf(const std::vector<double>& values, double u) {
  if (values.empty()) throw std::invalid_argument("ecf: empty sample");
  double re = 0.0, im = 0.0;
  for (double x : values) {
    const double a = u * x;
    re += std::cos(a);
    im += std::sin(a);
  }
  const double n = static_cast<double>(values.size());
  return cd(re / n, im / n);
}

CharFunction CharFunction::from_sample(const Sample& s) {
  if (s.values.empty()) throw std::invalid_argument("CharFunction::from_sample: empty sample");
  CharFunction cf;
  cf.empirical_ = true;
  cf.data_ = s.values;
  std::vector<double> mags(s.values.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::fabs(s.values[i]);
  std::sort(mags.begin(), mags.end());
  cf.oscillation_scale_ = quantile_sorted(mags, 0.99);
  cf.tag_ = s.provenance.empty() ? "empirical" : "empirical:" + s.provenance;
  return cf;
}

CharFunction CharFunction::exact(const MixtureModel& m) {
  CharFunction cf;
  cf.empirical_ = false;
  cf.fn_ = [m](double u) { return m.cf(u); };
  cf.oscillation_scale_ = 0.0;
  cf.tag_ = "exact:" + m.describe();
  return cf;
}

CharFunction CharFunction::exact_fn(std::function<cd(double)> fn, std::string label) {
  if (!fn) throw std::invalid_argument("CharFunction::exact_fn: null callable");
  CharFunction cf;
  cf.empirical_ = false;
  cf.fn_ = std::move(fn);
  cf.oscillation_scale_ = 0.0;
  cf.tag_ = std::move(label);
  return cf;
}

const std::vector<double>& CharFunction::data() const {
  if (!empirical_) throw std::logic_error("CharFunction::data: exact transform holds no sample");
  return data_;
}

cd CharFunction::operator()(double u) const {
  return empirical_ ? ecf(data_, u) : fn_(u);
}

EstimatorConfig EstimatorConfig::paper_tuning() { return EstimatorConfig{}; }

EstimatorConfig EstimatorConfig::theory_tuning(std::size_t n, double gamma, double kappa) {
  if (n < 2) throw std::invalid_argument("theory_tuning: need n >= 2");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("theory_tuning: kappa must be positive");
  EstimatorConfig cfg;
  cfg.gamma = gamma;
  cfg.u_max = std::pow(static_cast<double>(n), 0.25);
  cfg.v_max = kappa * std::log(static_cast<double>(n));
  return cfg;
}

std::vector<std::string> EstimatorConfig::validate() const {
  if (!std::isfinite(gamma) || !(gamma > 0.0) || !(gamma < 1.0))
    throw std::invalid_argument("EstimatorConfig: gamma must lie in (0, 1)");
  if (!std::isfinite(u_max) || !(u_max > 0.0))
    throw std::invalid_argument("EstimatorConfig: u_max must be positive and finite");
  if (!std::isfinite(v_max) || !(v_max > 0.0))
    throw std::invalid_argument("EstimatorConfig: v_max must be positive and finite");
  if (u_nodes_per_unit < 1)
    throw std::invalid_argument("EstimatorConfig: u_nodes_per_unit must be >= 1");
  if (v_nodes_per_unit < 1)
    throw std::invalid_argument("EstimatorConfig: v_nodes_per_unit must be >= 1");
  if (!std::isfinite(singularity_grading_exponent))
    throw std::invalid_argument("EstimatorConfig: grading exponent must be finite");

  std::vector<std::string> warnings;
  if (gamma >= 0.5) {
    std::ostringstream os;
    os << "gamma = " << gamma
       << " is at or above 1/2; Gamma(1 - gamma - iv) shrinks super-exponentially in v and the "
          "risk guarantees assume gamma < 1/2";
    warnings.push_back(os.str());
  }
  return warnings;
}

UMesh build_u_mesh(const EstimatorConfig& cfg, double oscillation_scale, double mu) {
  // Panel width small enough to resolve both e^{iux} over the bulk of the data
  // (|x| up to the 0.99 quantile) and psi(u)^{-iv} for |v| up to v_max.
  const double h =
      std::min(0.25, std::numbers::pi / (2.0 * (oscillation_scale + cfg.v_max)));
  const int order = std::clamp(
      static_cast<int>(std::ceil(h * static_cast<double>(cfg.u_nodes_per_unit))), 4, 32);

  // |psi(u)^{z-1} psi'(u)| ~ u^{-gamma} (mu != 0) or u^{1-2 gamma} (mu == 0)
  // near u = 0; grade the first panel so equal subpanels carry equal mass.
  double r = cfg.singularity_grading_exponent;
  if (!(r > 0.0))
    r = std::fabs(mu) >= h ? 1.0 / (1.0 - cfg.gamma)
                           : 1.0 / std::max(1.0 - 2.0 * cfg.gamma, 0.15);

  QuadMesh mesh;
  const double first = std::min(h, cfg.u_max);
  constexpr int kGradedSubpanels = 12;
  double prev = 0.0;
  for (int j = 1; j <= kGradedSubpanels; ++j) {
    const double edge =
        first * std::pow(static_cast<double>(j) / kGradedSubpanels, r);
    if (edge > prev) mesh.add_panel(prev, edge, order);
    prev = edge;
  }
  if (cfg.u_max > first) {
    const int panels = std::max(
        1, static_cast<int>(std::ceil((cfg.u_max - first) / h - 1e-12)));
    const double width = (cfg.u_max - first) / panels;
    for (int p = 0; p < panels; ++p)
      mesh.add_panel(first + p * width, first + (p + 1) * width, order);
  }

  UMesh out;
  out.nodes = std::move(mesh.nodes);
  out.weights = std::move(mesh.weights);
  out.spacing = h;
  out.gl_order = order;
  return out;
}

VMesh build_v_mesh(const EstimatorConfig& cfg) {
  const int panels =
      std::max(1, static_cast<int>(std::ceil(cfg.v_max / 0.25 - 1e-12)));
  const double width = cfg.v_max / panels;
  const int order = std::clamp(
      static_cast<int>(std::ceil(width * static_cast<double>(cfg.v_nodes_per_unit))), 4, 32);

  QuadMesh positive;
  for (int p = 0; p < panels; ++p)
    positive.add_panel(p * width, (p + 1) * width, order);

  // Negative nodes are exact mirrors so the two half-axes see identical
  // abscissas; Gauss nodes are interior, so v = 0 never appears.
  VMesh out;
  const std::size_t m = positive.size();
  out.nodes.resize(2 * m);
  out.weights.resize(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    out.nodes[i] = -positive.nodes[m - 1 - i];
    out.weights[i] = positive.weights[m - 1 - i];
    out.nodes[m + i] = positive.nodes[i];
    out.weights[m + i] = positive.weights[i];
  }
  return out;
}

namespace {

cd mellin_of_laplace_impl(const CharFunction& cf, const CharExponent& psi, cd z,
                          const EstimatorConfig& cfg, KernelSide side) {
  if (!(z.real() > 0.0) || !(z.real() < 2.0))
    throw std::invalid_argument("mellin_of_laplace: need 0 < Re z < 2");
  cfg.validate();

  const UMesh mesh = build_u_mesh(cfg, cf.oscillation_scale(), psi.mu);
  const cd zm1 = z - 1.0;
  cd acc = 0.0;
  if (side == KernelSide::conjugated) {
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
      const double u = mesh.nodes[i];
      acc += mesh.weights[i] * std::conj(cf(u)) * std::exp(zm1 * std::log(std::conj(psi(u)))) *
             std::conj(psi.deriv(u));
    }
  } else {
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
      const double u = mesh.nodes[i];
      acc += mesh.weights[i] * cf(u) * std::exp(zm1 * std::log(psi(u))) * psi.deriv(u);
    }
  }
  return acc;
}

}  // namespace

cd mellin_of_laplace(const CharFunction& cf, const CharExponent& psi, cd z,
                     const EstimatorConfig& cfg) {
  const KernelSide side =
      psi.mu * z.imag() > 0.0 ? KernelSide::conjugated : KernelSide::plain;
  return mellin_of_laplace_impl(cf, psi, z, cfg, side);
}

cd mellin_of_laplace(const CharFunction& cf, const CharExponent& psi, cd z,
                     const EstimatorConfig& cfg, KernelSide side) {
  if (psi.mu == 0.0)
    throw std::invalid_argument(
        "mellin_of_laplace: kernel side is a mu-dependent choice; with mu == 0 both kernels "
        "coincide and no side may be forced");
  return mellin_of_laplace_impl(cf, psi, z, cfg, side);
}

cd mellin_of_mixing_estimate(const CharFunction& cf, const CharExponent& psi, cd z,
                             const EstimatorConfig& cfg) {
  const cd w = 1.0 - z;
  if (near_gamma_pole(w, 1e-8))
    throw std::invalid_argument(
        "mellin_of_mixing_estimate: 1 - z is within 1e-8 of a pole of Gamma");
  return mellin_of_laplace(cf, psi, w, cfg) / gamma_fn(w);
}

namespace {

DensityEstimate run_inverse_mellin(const CharFunction& cf, double mu,
                                   const std::vector<double>& grid, const EstimatorConfig& cfg,
                                   std::string tag) {
  DensityEstimate out;
  out.warnings = cfg.validate();
  if (grid.empty()) throw std::invalid_argument("density grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      throw std::invalid_argument("density grid points must be positive and finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("density grid must be strictly increasing");
  }
  if (!std::isfinite(mu)) throw std::invalid_argument("drift must be finite");

  const UMesh um = build_u_mesh(cfg, cf.oscillation_scale(), mu);
  std::vector<cd> cf_on_u;
  if (cf.is_empirical()) {
    kernels::ecf_table(cf.data(), um.nodes, cf_on_u);
  } else {
    cf_on_u.resize(um.nodes.size());
    for (std::size_t i = 0; i < um.nodes.size(); ++i) cf_on_u[i] = cf(um.nodes[i]);
  }

  const VMesh vm = build_v_mesh(cfg);
  // v > 0 uses the conjugated kernel, v < 0 the plain one, each half computed
  // independently; the imaginary parts then cancel only as well as the
  // quadrature and the data allow, and their residual is reported untouched.
  std::vector<cd> profile;
  kernels::mellin_profile(cf_on_u, um.nodes, um.weights, mu, cfg.gamma, vm.nodes,
                          /*conjugate_positive_side=*/mu != 0.0, profile);

  std::vector<double> values, imag_abs;
  kernels::invert_grid(profile, vm.nodes, vm.weights, cfg.gamma, grid, values, imag_abs);

  out.grid = grid;
  out.values = std::move(values);
  out.max_imag_residual = 0.0;
  for (double a : imag_abs) out.max_imag_residual = std::max(out.max_imag_residual, a);
  out.estimator_tag = std::move(tag);
  out.config = cfg;
  out.mu_used = mu;
  return out;
}

}  // namespace

std::vector<double> DensityEstimate::nonnegative_view() const {
  std::vector<double> v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = std::max(values[i], 0.0);
  return v;
}

DensityEstimate estimate_density_known_mu(const CharFunction& cf, double mu,
                                          const std::vector<double>& grid,
                                          const EstimatorConfig& cfg) {
  return run_inverse_mellin(cf, mu, grid, cfg, cf.is_empirical() ? "known_mu" : "oracle_cf");
}

DensityEstimate estimate_density_plugin(const CharFunction& cf, double mu_hat,
                                        const std::vector<double>& grid,
                                        const EstimatorConfig& cfg) {
  return run_inverse_mellin(cf, mu_hat, grid, cfg, "plugin_mu");
}

DensityEstimate estimate_density_auto(const Sample& s, const std::vector<double>& grid,
                                      const EstimatorConfig& cfg, const WeightFunction& w,
                                      double big_m) {
  const MuEstimate fit = estimate_mu(s.values, w, big_m);
  const CharFunction cf = CharFunction::from_sample(s);
  DensityEstimate out = estimate_density_plugin(cf, fit.value, grid, cfg);
  out.mu_fit = fit;
  if (!fit.bracket_found) {
    std::ostringstream os;
    os << "drift bisection found no sign change on [0, " << big_m << "]; clamped to "
       << fit.value;
    out.warnings.push_back(os.str());
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || !(step > 0.0))
    throw std::invalid_argument("make_grid: need finite bounds and step > 0");
  if (hi < lo) throw std::invalid_argument("make_grid: hi below lo");
  const int count = static_cast<int>(std::floor((hi - lo) / step + 0.5));
  std::vector<double> g(static_cast<std::size_t>(count) + 1);
  for (int k = 0; k <= count; ++k) g[static_cast<std::size_t>(k)] = lo + k * step;
  return g;
}

}  // namespace nvmix
