#include "nvmix/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nvmix/complex_special.hpp"
#include "nvmix/quadrature.hpp"

namespace nvmix {

namespace {

double normal_pdf(double x, double mean, double var) {
  constexpr double inv_sqrt_two_pi = 0.39894228040143267794;
  return inv_sqrt_two_pi / std::sqrt(var) * std::exp(-0.5 * (x - mean) * (x - mean) / var);
}

double log_beta(double p, double q) {
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

// int_0^1 e^{-ts} s^{p-1} (1-s)^{q-1} ds / B(p,q) via s = sin^2(theta); the
// substitution keeps the endpoints integrable down to p, q > 1/2 and exact
// for p, q >= 1.
cd beta_laplace(cd t, double p, double q) {
  auto f = [&](double th) {
    const double sn = std::sin(th);
    const double cn = std::cos(th);
    const double s = sn * sn;
    return std::exp(-t * s) * (2.0 * std::pow(sn, 2.0 * p - 1.0) * std::pow(cn, 2.0 * q - 1.0));
  };
  const cd raw = integrate_adaptive(f, 0.0, 0.5 * std::numbers::pi, 1e-12, 16, 20, 1e-300);
  return raw * std::exp(-log_beta(p, q));
}

}  // namespace

void GigParams::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("GigParams: delta must be positive");
  if (!(psi_gig > 0.0)) throw std::invalid_argument("GigParams: psi_gig must be positive");
}

double gig_density(double s, const GigParams& p) {
  p.validate();
  if (s <= 0.0) return 0.0;
  const double norm =
      std::pow(p.psi_gig / p.delta, p.lambda) / (2.0 * bessel_k(p.lambda, p.delta * p.psi_gig));
  return norm * std::pow(s, p.lambda - 1.0) *
         std::exp(-0.5 * (p.psi_gig * p.psi_gig * s + p.delta * p.delta / s));
}

cd gig_laplace(cd t, const GigParams& p) {
  p.validate();
  const double psi2 = p.psi_gig * p.psi_gig;
  if (!(t.real() > -0.5 * psi2))
    throw std::domain_error("gig_laplace: Re t must exceed -psi_gig^2/2");
  const cd w = psi2 + 2.0 * t;
  const cd arg = p.delta * std::sqrt(w);  // principal sqrt; Re w > 0
  return complex_pow(psi2 / w, 0.5 * p.lambda) * bessel_k(p.lambda, arg) /
         bessel_k(p.lambda, p.delta * p.psi_gig);
}

double gig_sample_one(RandomSource& rng, const GigParams& gp) {
  gp.validate();
  // Devroye (2014) in the (p, a, b) parametrization a = psi_gig^2, b = delta^2.
  const double p = gp.lambda;
  const double a = gp.psi_gig * gp.psi_gig;
  const double b = gp.delta * gp.delta;
  const double abs_p = std::fabs(p);
  const double omega = std::sqrt(a * b);
  const double alpha = std::sqrt(omega * omega + abs_p * abs_p) - abs_p;
  auto log_h = [&](double x) {
    return -alpha * (std::cosh(x) - 1.0) - abs_p * (std::exp(x) - x - 1.0);
  };
  auto log_h_deriv = [&](double x) {
    return -alpha * std::sinh(x) - abs_p * (std::exp(x) - 1.0);
  };

  double t = 1.0;
  double lc = -log_h(1.0);
  if (lc > 2.0)
    t = std::sqrt(2.0 / (alpha + abs_p));
  else if (lc < 0.5)
    t = std::log(4.0 / (alpha + 2.0 * abs_p));

  double s = 1.0;
  lc = -log_h(-1.0);
  if (lc > 2.0)
    s = std::sqrt(4.0 / (alpha * std::cosh(1.0) + abs_p));
  else if (lc < 0.5)
    s = std::min(1.0 / abs_p, std::log(1.0 + 1.0 / alpha +
                                       std::sqrt(1.0 / (alpha * alpha) + 2.0 / alpha)));

  const double eta = -log_h(t);
  const double zeta = -log_h_deriv(t);
  const double theta = -log_h(-s);
  const double xi = log_h_deriv(-s);
  const double pp = 1.0 / xi;
  const double r = 1.0 / zeta;
  const double td = t - r * eta;
  const double sd = s - pp * theta;
  const double q = td + sd;
  auto envelope = [&](double x) {
    if (x >= -sd && x <= td) return 1.0;
    if (x > td) return std::exp(-eta - zeta * (x - t));
    return std::exp(-theta + xi * (x + s));
  };

  double cand = 0.0;
  for (;;) {
    const double u = rng.uniform01();
    const double v = rng.uniform01();
    const double w = rng.uniform01();
    if (u < q / (pp + q + r))
      cand = -sd + q * v;
    else if (u < (q + r) / (pp + q + r))
      cand = td - r * std::log(v);
    else
      cand = -sd + pp * std::log(v);
    if (w * envelope(cand) <= std::exp(log_h(cand))) break;
  }
  cand = (abs_p / omega + std::sqrt(1.0 + abs_p * abs_p / (omega * omega))) * std::exp(cand);
  return p > 0.0 ? cand * std::sqrt(b / a) : std::sqrt(b / a) / cand;
}

double gh_density(double x, double mu, const GigParams& p) {
  p.validate();
  if (p.lambda == 1.0) {
    const double alpha = std::hypot(p.psi_gig, mu);
    const double norm = p.psi_gig / (2.0 * alpha * p.delta * bessel_k(1.0, p.delta * p.psi_gig));
    return norm * std::exp(-alpha * std::sqrt(p.delta * p.delta + x * x) + mu * x);
  }
  auto f = [&](double s) { return normal_pdf(x, mu * s, s) * gig_density(s, p); };
  return integrate_positive_axis(f, 1e-10);
}

MixingModel MixingModel::gig_model(GigParams p) {
  p.validate();
  return MixingModel(Kind::gig, p, 0.0, 0.0);
}

MixingModel MixingModel::gamma_model(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma_model: shape and rate must be positive");
  return MixingModel(Kind::gamma, GigParams{}, shape, rate);
}

MixingModel MixingModel::beta_model(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("beta_model: p, q must be positive");
  return MixingModel(Kind::beta, GigParams{}, p, q);
}

MixingModel MixingModel::point_mass(double s0) {
  if (!(s0 > 0.0)) throw std::invalid_argument("point_mass: location must be positive");
  return MixingModel(Kind::point_mass, GigParams{}, s0, 0.0);
}

double MixingModel::density(double s) const {
  switch (kind_) {
    case Kind::gig:
      return gig_density(s, gig_);
    case Kind::gamma: {
      if (s <= 0.0) return 0.0;
      return std::exp(a_ * std::log(b_) + (a_ - 1.0) * std::log(s) - b_ * s - std::lgamma(a_));
    }
    case Kind::beta: {
      if (s <= 0.0 || s >= 1.0) return 0.0;
      return std::exp((a_ - 1.0) * std::log(s) + (b_ - 1.0) * std::log(1.0 - s) -
                      log_beta(a_, b_));
    }
    case Kind::point_mass:
      throw std::logic_error("point_mass has no Lebesgue density");
  }
  throw std::logic_error("unreachable");
}

double MixingModel::sample_one(RandomSource& rng) const {
  switch (kind_) {
    case Kind::gig:
      return gig_sample_one(rng, gig_);
    case Kind::gamma:
      return rng.gamma_draw(a_) / b_;
    case Kind::beta: {
      const double x = rng.gamma_draw(a_);
      const double y = rng.gamma_draw(b_);
      return x / (x + y);
    }
    case Kind::point_mass:
      return a_;
  }
  throw std::logic_error("unreachable");
}

std::vector<double> MixingModel::sample(RandomSource& rng, std::size_t n) const {
  if (n == 0) throw std::invalid_argument("sample: n must be at least 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sample_one(rng);
  return out;
}

cd MixingModel::laplace(cd t) const {
  switch (kind_) {
    case Kind::gig:
      return gig_laplace(t, gig_);
    case Kind::gamma: {
      if (!(t.real() > -b_)) throw std::domain_error("laplace: Re t must exceed -rate");
      return complex_pow(1.0 + t / b_, cd(-a_, 0.0));
    }
    case Kind::beta:
      return beta_laplace(t, a_, b_);
    case Kind::point_mass:
      return std::exp(-a_ * t);
  }
  throw std::logic_error("unreachable");
}

bool MixingModel::has_exact_mellin() const { return kind_ != Kind::gig; }

cd MixingModel::exact_mellin(cd z) const {
  switch (kind_) {
    case Kind::gig:
      throw std::logic_error("exact_mellin: unsupported for gig; use mellin_by_quadrature");
    case Kind::gamma: {
      // b^{1-z} Gamma(a + z - 1) / Gamma(a)
      const cd arg = a_ + z - 1.0;
      if (near_gamma_pole(arg, 1e-8)) throw std::domain_error("exact_mellin: gamma pole");
      return complex_pow(b_, 1.0 - z) * std::exp(log_gamma(arg) - std::lgamma(a_));
    }
    case Kind::beta: {
      // B(p + z - 1, q) / B(p, q)
      const cd arg = a_ + z - 1.0;
      if (near_gamma_pole(arg, 1e-8)) throw std::domain_error("exact_mellin: gamma pole");
      return std::exp(log_gamma(arg) + std::lgamma(a_ + b_) - std::lgamma(a_) -
                      log_gamma(arg + b_));
    }
    case Kind::point_mass:
      return complex_pow(a_, z - 1.0);
  }
  throw std::logic_error("unreachable");
}

std::string MixingModel::smoothness_class() const {
  switch (kind_) {
    case Kind::gig:
    case Kind::gamma:
      return "exponential";
    case Kind::beta:
      return "polynomial";
    case Kind::point_mass:
      return "none";
  }
  throw std::logic_error("unreachable");
}

std::string MixingModel::describe() const {
  switch (kind_) {
    case Kind::gig:
      return "gig(lambda=" + std::to_string(gig_.lambda) + ", delta=" + std::to_string(gig_.delta) +
             ", psi_gig=" + std::to_string(gig_.psi_gig) + ")";
    case Kind::gamma:
      return "gamma(shape=" + std::to_string(a_) + ", rate=" + std::to_string(b_) + ")";
    case Kind::beta:
      return "beta(p=" + std::to_string(a_) + ", q=" + std::to_string(b_) + ")";
    case Kind::point_mass:
      return "point_mass(s0=" + std::to_string(a_) + ")";
  }
  throw std::logic_error("unreachable");
}

cd mellin_by_quadrature(const MixingModel& m, cd z, double rel_tol) {
  auto f = [&](double s) -> cd { return m.density(s) * complex_pow(s, z - 1.0); };
  return integrate_positive_axis_complex(f, rel_tol);
}

cd MixtureModel::cf(double u) const {
  const cd psi(0.5 * u * u, -mu * u);
  return mixing.laplace(psi);
}

double MixtureModel::density(double x) const {
  if (mixing.kind() == MixingModel::Kind::gig && mixing.gig_params().lambda == 1.0)
    return gh_density(x, mu, mixing.gig_params());
  if (mixing.kind() == MixingModel::Kind::point_mass) {
    const double s = mixing.param_a();
    return normal_pdf(x, mu * s, s);
  }
  auto f = [&](double s) { return normal_pdf(x, mu * s, s) * mixing.density(s); };
  return integrate_positive_axis(f, 1e-10);
}

std::vector<double> MixtureModel::sample(RandomSource& rng, std::size_t n) const {
  if (n == 0) throw std::invalid_argument("sample: n must be at least 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = mixing.sample_one(rng);
    out[i] = mu * xi + std::sqrt(xi) * rng.normal();
  }
  return out;
}

std::string MixtureModel::describe() const {
  return "mixture(mu=" + std::to_string(mu) + ", mixing=" + mixing.describe() + ")";
}

}  // namespace nvmix
