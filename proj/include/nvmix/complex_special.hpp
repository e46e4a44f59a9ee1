#pragma once

// Complex log-gamma / gamma, principal-branch powers, and the modified Bessel
// function K. Accuracy targets: ~1e-13 relative for gamma on the strip
// Re z in [-5, 50], |Im z| <= 60; ~1e-12 relative for K with |order| <= 21,
// Re(argument) in (0, 50] plus moderate imaginary parts.

#include <complex>

namespace nvmix {

using cd = std::complex<double>;

// Stirling series pushed to Re >= 15 by the recurrence; reflection below
// Re = 0.5. Conjugate-symmetric; throws std::domain_error at the poles.
cd log_gamma(cd z);

// exp(log_gamma(z)).
cd gamma_fn(cd z);

// True when z lies within tol of a nonpositive integer.
bool near_gamma_pole(cd z, double tol);

// exp(exponent * Log(base)) with the principal log; throws std::domain_error
// at base == 0.
cd complex_pow(cd base, cd exponent);

// K_order(x) for x > 0, via the cosh integral representation.
double bessel_k(double order, double x);

// K_order(z) for Re z > 0.
cd bessel_k(double order, cd z);

}  // namespace nvmix
