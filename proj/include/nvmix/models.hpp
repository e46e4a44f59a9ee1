#pragma once

// Test-bed distributions: generalized inverse Gaussian (GIG) mixing with the
// generalized hyperbolic observable, plus gamma, beta, and point-mass mixing
// laws. Densities, samplers, Laplace transforms, and Mellin transforms double
// as oracles for the nonparametric estimator.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "nvmix/rng.hpp"

namespace nvmix {

using cd = std::complex<double>;

struct GigParams {
  double lambda = 1.0;
  double delta = 1.0;
  double psi_gig = 1.0;  // the scale parameter; named apart from the
                         // characteristic exponent used elsewhere

  void validate() const;  // delta > 0 and psi_gig > 0
};

// Density of GIG(lambda, delta, psi_gig); zero for s <= 0.
double gig_density(double s, const GigParams& p);

// Laplace transform; requires Re t > -psi_gig^2 / 2.
cd gig_laplace(cd t, const GigParams& p);

// One rejection-sampled draw (Devroye's three-piece envelope).
double gig_sample_one(RandomSource& rng, const GigParams& p);

// Observable density of mu*xi + sqrt(xi)*eta with xi ~ GIG. Closed form for
// lambda == 1; the mixing integral otherwise.
double gh_density(double x, double mu, const GigParams& p);

class MixingModel {
 public:
  enum class Kind { gig, gamma, beta, point_mass };

  static MixingModel gig_model(GigParams p);
  static MixingModel gamma_model(double shape, double rate);
  static MixingModel beta_model(double p, double q);
  static MixingModel point_mass(double s0);

  Kind kind() const { return kind_; }
  const GigParams& gig_params() const { return gig_; }
  double param_a() const { return a_; }  // shape / p / s0 by variant
  double param_b() const { return b_; }  // rate / q by variant

  // Lebesgue density on (0, inf); throws for point_mass.
  double density(double s) const;

  double sample_one(RandomSource& rng) const;
  std::vector<double> sample(RandomSource& rng, std::size_t n) const;  // n >= 1

  // Laplace transform E[e^{-t xi}]; closed form except beta, which is
  // integrated numerically.
  cd laplace(cd t) const;

  bool has_exact_mellin() const;  // false for gig
  cd exact_mellin(cd z) const;    // throws for gig; pole guard on the gammas

  // Decay of the Mellin transform along vertical lines:
  // exponential / polynomial / none.
  std::string smoothness_class() const;

  std::string describe() const;

 private:
  MixingModel(Kind k, GigParams g, double a, double b) : kind_(k), gig_(g), a_(a), b_(b) {}

  Kind kind_;
  GigParams gig_{};
  double a_ = 0.0;
  double b_ = 0.0;
};

// Mellin transform by direct quadrature of the mixing density; works for any
// variant with a density. Oracle fallback where no closed form exists.
cd mellin_by_quadrature(const MixingModel& m, cd z, double rel_tol = 1e-10);

struct Sample {
  std::vector<double> values;
  std::string provenance;

  std::size_t n() const { return values.size(); }
};

struct MixtureModel {
  double mu = 0.0;
  MixingModel mixing;

  // Characteristic function: laplace evaluated along -i*mu*u + u^2/2.
  cd cf(double u) const;

  // Observable density; closed form for GIG mixing with lambda == 1,
  // numerical mixing integral otherwise.
  double density(double x) const;

  // Composition sampler: mu*xi + sqrt(xi)*eta.
  std::vector<double> sample(RandomSource& rng, std::size_t n) const;

  std::string describe() const;
};

}  // namespace nvmix
