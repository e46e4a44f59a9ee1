#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "nvmix/complex_special.hpp"
#include "nvmix/models.hpp"
#include "nvmix/quadrature.hpp"
#include "nvmix/rng.hpp"

using nvmix::cd;
using nvmix::GigParams;
using nvmix::MixingModel;
using nvmix::MixtureModel;
using nvmix::RandomSource;
using test::rel_err;

TEST_CASE("gig parameter validation") {
  CHECK_THROWS_AS((GigParams{1.0, 0.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GigParams{1.0, 1.0, -2.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((GigParams{-0.5, 2.0, 0.3}.validate()));  // any real order is fine
}

TEST_CASE("densities integrate to one") {
  const GigParams gig{1.0, 1.0, 1.0};
  const double m_gig =
      nvmix::integrate_positive_axis([&](double s) { return nvmix::gig_density(s, gig); }, 1e-9);
  CHECK(std::fabs(m_gig - 1.0) <= 1e-6);

  const MixingModel gamma = MixingModel::gamma_model(2.0, 1.0);
  const double m_gamma =
      nvmix::integrate_positive_axis([&](double s) { return gamma.density(s); }, 1e-9);
  CHECK(std::fabs(m_gamma - 1.0) <= 1e-6);

  const MixingModel beta = MixingModel::beta_model(2.0, 3.0);
  const double m_beta =
      nvmix::integrate_adaptive([&](double s) { return beta.density(s); }, 0.0, 1.0, 1e-10);
  CHECK(std::fabs(m_beta - 1.0) <= 1e-6);
}

TEST_CASE("gig laplace transform against frozen values and direct quadrature") {
  const GigParams p{1.0, 1.0, 1.0};
  CHECK(rel_err(nvmix::gig_laplace(cd(1.0, 0.0), p), cd(0.19216490741177324484, 0.0)) <= 1e-11);
  CHECK(rel_err(nvmix::gig_laplace(cd(0.5, -0.5), p),
                cd(0.24051283256408742993, 0.21416068892823450631)) <= 1e-11);
  CHECK(rel_err(nvmix::gig_laplace(cd(28.88, -3.8), p),
                cd(3.9021570007212281464e-5, 2.6350900522251300545e-5)) <= 1e-10);

  // Independent route: integrate e^{-ts} g(s) directly.
  for (const cd t : {cd(0.3, 0.0), cd(1.0, 0.7)}) {
    const cd direct = nvmix::integrate_positive_axis_complex(
        [&](double s) { return std::exp(-t * s) * nvmix::gig_density(s, p); }, 1e-10);
    CHECK(rel_err(nvmix::gig_laplace(t, p), direct) <= 1e-9);
  }

  CHECK_THROWS_AS(nvmix::gig_laplace(cd(-0.6, 0.0), p), std::domain_error);
}

TEST_CASE("gamma and beta and point-mass laplace transforms") {
  const MixingModel gamma = MixingModel::gamma_model(2.0, 1.0);
  CHECK(rel_err(gamma.laplace(cd(1.0, 0.0)), cd(0.25, 0.0)) <= 1e-14);
  CHECK_THROWS_AS(gamma.laplace(cd(-1.5, 0.0)), std::domain_error);

  const MixingModel beta = MixingModel::beta_model(2.0, 3.0);
  CHECK(rel_err(beta.laplace(cd(1.0, 0.0)), cd(0.68357364754153712683, 0.0)) <= 1e-10);
  CHECK(rel_err(beta.laplace(cd(0.5, -0.5)),
                cd(0.80406718667456893056, 0.1547177891122669062)) <= 1e-10);

  const MixingModel point = MixingModel::point_mass(1.3);
  const cd t(0.4, -1.1);
  CHECK(rel_err(point.laplace(t), std::exp(-t * 1.3)) <= 1e-14);
  CHECK_THROWS_AS(point.density(1.0), std::logic_error);
}

TEST_CASE("exact mellin transforms against frozen values") {
  const MixingModel gamma = MixingModel::gamma_model(2.0, 1.0);
  CHECK(gamma.has_exact_mellin());
  CHECK(rel_err(gamma.exact_mellin(cd(0.3, 0.0)), cd(0.89747069630627718849, 0.0)) <= 1e-13);
  CHECK(rel_err(gamma.exact_mellin(cd(0.3, 2.0)),
                cd(0.16720942643616868595, 0.092435201364382229278)) <= 1e-12);
  CHECK(rel_err(gamma.exact_mellin(cd(0.1, -0.9)),
                cd(0.56923723708008621948, 0.12040005641606380711)) <= 1e-12);

  const MixingModel beta = MixingModel::beta_model(2.0, 3.0);
  CHECK(rel_err(beta.exact_mellin(cd(0.3, 0.0)), cd(2.432350258437214959, 0.0)) <= 1e-12);
  CHECK(rel_err(beta.exact_mellin(cd(0.3, 2.0)),
                cd(-0.54071793844859738224, -0.66290012867943986296)) <= 1e-12);

  const MixingModel point = MixingModel::point_mass(1.3);
  const cd z(0.4, 1.5);
  CHECK(rel_err(point.exact_mellin(z), nvmix::complex_pow(cd(1.3, 0.0), z - 1.0)) <= 1e-14);

  // z = 1 recovers total mass 1 for every family with a closed form.
  for (const MixingModel* m : {&gamma, &beta, &point})
    CHECK(rel_err(m->exact_mellin(cd(1.0, 0.0)), cd(1.0, 0.0)) <= 1e-13);

  const MixingModel gig = MixingModel::gig_model(GigParams{1.0, 1.0, 1.0});
  CHECK(!gig.has_exact_mellin());
  CHECK_THROWS_AS(gig.exact_mellin(cd(0.3, 0.0)), std::logic_error);

  // Pole guard: gamma-mixing Mellin hits Gamma(shape + z - 1) poles.
  CHECK_THROWS_AS(gamma.exact_mellin(cd(-1.0, 0.0)), std::domain_error);
  CHECK_NOTHROW(gamma.exact_mellin(cd(-0.99, 0.0)));
}

TEST_CASE("mellin by quadrature agrees with closed forms and Bessel identities") {
  const MixingModel gamma = MixingModel::gamma_model(2.0, 1.0);
  const cd z(0.3, 2.0);
  CHECK(rel_err(nvmix::mellin_by_quadrature(gamma, z), gamma.exact_mellin(z)) <= 1e-8);

  // GIG(1,1,1): M[g](z) = K_z(1)/K_1(1) continued in z, frozen via mpmath.
  const MixingModel gig = MixingModel::gig_model(GigParams{1.0, 1.0, 1.0});
  CHECK(rel_err(nvmix::mellin_by_quadrature(gig, cd(0.3, 0.0)),
                cd(0.72282903806660562362, 0.0)) <= 1e-8);
  CHECK(rel_err(nvmix::mellin_by_quadrature(gig, cd(0.3, 2.0)),
                cd(0.12199370308237438909, 0.07769679590782981523)) <= 1e-8);
}

TEST_CASE("characteristic function of the mixture against frozen values") {
  const MixtureModel gh{0.5, MixingModel::gig_model(GigParams{1.0, 1.0, 1.0})};
  CHECK(rel_err(gh.cf(1.0), cd(0.24051283256408742993, 0.21416068892823450631)) <= 1e-11);
  CHECK(rel_err(gh.cf(7.6), cd(3.9021570007212291283e-5, 2.6350900522251308312e-5)) <= 1e-10);
  CHECK(rel_err(gh.cf(0.3), cd(0.79559175744831965664, 0.30826553849647962425)) <= 1e-11);

  // u = 0 gives 1 for every mixture.
  for (const MixtureModel m :
       {gh, MixtureModel{-0.3, MixingModel::gamma_model(2.0, 1.0)},
        MixtureModel{0.0, MixingModel::beta_model(2.0, 3.0)},
        MixtureModel{1.0, MixingModel::point_mass(2.0)}}) {
    CHECK(rel_err(m.cf(0.0), cd(1.0, 0.0)) <= 1e-12);
  }
}

TEST_CASE("observable density: closed form, mixing integral, and tail slopes") {
  const GigParams p{1.0, 1.0, 1.0};
  CHECK(rel_err(nvmix::gh_density(-2.0, 0.5, p), 0.02243648146668819987) <= 1e-10);
  CHECK(rel_err(nvmix::gh_density(0.3, 0.5, p), 0.26865459417138697931) <= 1e-10);
  CHECK(rel_err(nvmix::gh_density(1.0, 0.5, p), 0.25203033087699218207) <= 1e-10);
  CHECK(rel_err(nvmix::gh_density(5.0, 0.5, p), 0.030259529070913883404) <= 1e-10);

  // Independent route through the mixing integral.
  for (double x : {0.3, 1.0}) {
    const double direct = nvmix::integrate_positive_axis(
        [&](double s) {
          const double var = s;
          const double mean = 0.5 * s;
          return std::exp(-0.5 * (x - mean) * (x - mean) / var) /
                 std::sqrt(2.0 * std::numbers::pi * var) * nvmix::gig_density(s, p);
        },
        1e-10);
    CHECK(rel_err(nvmix::gh_density(x, 0.5, p), direct) <= 1e-8);
  }

  // p(x)/p(-x) = e^{2 mu x} for the lambda = 1 closed form.
  const double ratio = nvmix::gh_density(1.7, 0.5, p) / nvmix::gh_density(-1.7, 0.5, p);
  CHECK(rel_err(ratio, std::exp(2.0 * 0.5 * 1.7)) <= 1e-12);

  // Log-density slopes approach mu -/+ alpha, alpha = sqrt(psi^2 + mu^2).
  const double alpha = std::sqrt(1.0 + 0.25);
  const double right = (std::log(nvmix::gh_density(800.0, 0.5, p)) -
                        std::log(nvmix::gh_density(300.0, 0.5, p))) /
                       500.0;
  CHECK(std::fabs(right - (0.5 - alpha)) <= 1e-5);
  const double left = (std::log(nvmix::gh_density(-300.0, 0.5, p)) -
                       std::log(nvmix::gh_density(-100.0, 0.5, p))) /
                      (-200.0);
  CHECK(std::fabs(left - (0.5 + alpha)) <= 1e-4);

  // Normalizing constant: log p(x) - (mu x - alpha sqrt(delta^2 + x^2)) is the
  // frozen intercept log(psi/(2 alpha delta K_1(delta psi))).
  const double x = 2.1;
  const double intercept = std::log(nvmix::gh_density(x, 0.5, p)) -
                           (0.5 * x - alpha * std::sqrt(1.0 + x * x));
  CHECK(std::fabs(intercept - (-0.29706700800629785635)) <= 1e-10);
}

TEST_CASE("samplers pass Kolmogorov-Smirnov at the 1 percent level") {
  const double crit = 1.628;  // alpha = 0.01 asymptotic critical constant

  const GigParams p{1.0, 1.0, 1.0};
  const MixingModel gig = MixingModel::gig_model(p);
  RandomSource rng(2024);
  const std::vector<double> gs = gig.sample(rng, 20000);
  const test::TableCdf gig_cdf([&](double s) { return nvmix::gig_density(s, p); }, 1e-9, 40.0,
                               20001);
  CHECK(test::ks_statistic(gs, gig_cdf) <= crit / std::sqrt(20000.0));

  const MixingModel gamma = MixingModel::gamma_model(2.0, 1.0);
  RandomSource rng2(2025);
  const std::vector<double> ga = gamma.sample(rng2, 20000);
  CHECK(test::ks_statistic(ga, [](double x) {
          return x <= 0.0 ? 0.0 : 1.0 - (1.0 + x) * std::exp(-x);
        }) <= crit / std::sqrt(20000.0));

  const MixingModel beta = MixingModel::beta_model(2.0, 3.0);
  RandomSource rng3(2026);
  const std::vector<double> be = beta.sample(rng3, 20000);
  const test::TableCdf beta_cdf([&](double s) { return beta.density(s); }, 0.0, 1.0, 20001);
  CHECK(test::ks_statistic(be, beta_cdf) <= crit / std::sqrt(20000.0));

  // Point-mass mixing turns the observable into a shifted, scaled normal.
  const MixtureModel pm{0.3, MixingModel::point_mass(2.0)};
  RandomSource rng4(2027);
  const std::vector<double> xs = pm.sample(rng4, 20000);
  CHECK(test::ks_statistic(xs, [](double x) {
          return 0.5 * std::erfc(-(x - 0.6) / std::sqrt(2.0 * 2.0));
        }) <= crit / std::sqrt(20000.0));
}

TEST_CASE("gig sampler mean matches the Bessel ratio within Monte Carlo error") {
  const MixingModel gig = MixingModel::gig_model(GigParams{1.0, 1.0, 1.0});
  RandomSource rng(77);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += gig.sample_one(rng);
  const double mean = 2.6994839355937723439;
  const double ex2 = nvmix::bessel_k(3.0, 1.0) / nvmix::bessel_k(1.0, 1.0);
  const double sd = std::sqrt(ex2 - mean * mean);
  CHECK(std::fabs(sum / n - mean) <= 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("mixture sampling and descriptions") {
  const MixtureModel pm{0.3, MixingModel::point_mass(2.0)};
  RandomSource rng(8);
  const std::vector<double> xs = pm.sample(rng, 50000);
  double sum = 0.0;
  for (double x : xs) sum += x;
  CHECK(std::fabs(sum / 50000.0 - 0.6) <= 4.0 * std::sqrt(2.0 / 50000.0));
  CHECK_THROWS_AS(pm.sample(rng, 0), std::invalid_argument);

  CHECK(rel_err(pm.density(0.6), 1.0 / std::sqrt(2.0 * std::numbers::pi * 2.0)) <= 1e-12);

  CHECK(MixingModel::gig_model(GigParams{}).smoothness_class() == "exponential");
  CHECK(MixingModel::gamma_model(2.0, 1.0).smoothness_class() == "exponential");
  CHECK(MixingModel::beta_model(2.0, 3.0).smoothness_class() == "polynomial");
  CHECK(MixingModel::point_mass(1.0).smoothness_class() == "none");

  CHECK(MixingModel::gamma_model(2.0, 1.0).describe().find("gamma") != std::string::npos);
  CHECK(MixtureModel{0.5, MixingModel::gig_model(GigParams{})}.describe().find("gig") !=
        std::string::npos);
}
