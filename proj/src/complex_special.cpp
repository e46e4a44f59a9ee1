#include "nvmix/complex_special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nvmix/quadrature.hpp"

namespace nvmix {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kLogPi = 1.1447298858494001741;

// B_{2n} / ((2n-1)(2n)), the Stirling tail coefficients.
constexpr double kStirlingCoeff[] = {
    1.0 / 12,           -1.0 / 360,          1.0 / 1260,
    -1.0 / 1680,        1.0 / 1188,          -691.0 / 360360,
    1.0 / 156,          -3617.0 / 122400,    43867.0 / 244188,
    -174611.0 / 125400,
};

cd stirling_tail(cd w) {
  const cd w2 = w * w;
  cd term = 1.0 / w;  // w^{-(2n-1)}
  cd acc = 0.0;
  for (double c : kStirlingCoeff) {
    acc += c * term;
    term /= w2;
  }
  return acc;
}

// sin(pi z) with the real part reduced mod 1; keeps full precision near the
// zeros, where the reflection formula would otherwise cancel catastrophically.
cd sin_pi(cd z) {
  const double k = std::round(z.real());
  const cd r = z - k;
  const cd s = std::sin(std::numbers::pi * r);
  const bool odd = std::fmod(std::fabs(k), 2.0) == 1.0;
  return odd ? -s : s;
}

}  // namespace

cd log_gamma(cd z) {
  if (z.real() < 0.5) {
    const cd s = sin_pi(z);
    if (s == cd(0.0, 0.0)) throw std::domain_error("log_gamma: pole");
    return cd(kLogPi, 0.0) - std::log(s) - log_gamma(1.0 - z);
  }
  cd shift = 0.0;
  cd w = z;
  while (w.real() < 15.0) {
    shift += std::log(w);
    w += 1.0;
  }
  return (w - 0.5) * std::log(w) - w + 0.5 * kLogTwoPi + stirling_tail(w) - shift;
}

cd gamma_fn(cd z) { return std::exp(log_gamma(z)); }

bool near_gamma_pole(cd z, double tol) {
  const double k = std::round(z.real());
  if (k > 0.5) return false;
  return std::abs(z - cd(k, 0.0)) <= tol;
}

cd complex_pow(cd base, cd exponent) {
  if (base == cd(0.0, 0.0)) throw std::domain_error("complex_pow: base is zero");
  return std::exp(exponent * std::log(base));
}

namespace {

// Shared driver for real/complex argument: the integrand is
// 0.5 (e^{nu t - z cosh t} + e^{-nu t - z cosh t}), rescaled by its envelope
// peak so intermediate sums stay O(1).
template <class T>
T bessel_k_impl(double order, T z, double re_z) {
  const double nu = std::fabs(order);  // K is even in the order
  const double tstar = std::asinh(nu / re_z);
  const double peak = nu * tstar - re_z * std::cosh(tstar);
  if (peak > 690.0) throw std::overflow_error("bessel_k: result overflows double");
  double t_end = tstar + 1.0;
  while (nu * t_end - re_z * std::cosh(t_end) > peak - 60.0) t_end += 0.5;
  auto f = [&](double t) {
    const T e = -z * std::cosh(t) - peak;
    return 0.5 * (std::exp(nu * t + e) + std::exp(-nu * t + e));
  };
  const T scaled = integrate_adaptive(f, 0.0, t_end, 1e-13, 16, 20, 1e-250);
  return std::exp(peak) * scaled;
}

}  // namespace

double bessel_k(double order, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
  return bessel_k_impl(order, x, x);
}

cd bessel_k(double order, cd z) {
  if (!(z.real() > 0.0)) throw std::domain_error("bessel_k: Re(argument) must be positive");
  return bessel_k_impl(order, z, z.real());
}

}  // namespace nvmix
