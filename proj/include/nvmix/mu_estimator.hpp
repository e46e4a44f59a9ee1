#pragma once

// Drift estimation: locate the zero of the monotone weighted empirical
// transform (1/n) sum e^{-rho X_i} w(X_i) by bisection on [0, M].

#include <functional>
#include <string>
#include <vector>

namespace nvmix {

// Odd weight with compact support; w <= 0 on [0, A]. Oddness plus the sign
// constraint make the transform nondecreasing in rho.
struct WeightFunction {
  std::function<double(double)> fn;
  double support_radius = 0.0;
  std::string tag;

  double operator()(double x) const { return fn(x); }

  // -sin(x) on |x| <= pi, zero outside.
  static WeightFunction sine_window();
};

// (1/n) sum_i e^{-rho x_i} w(x_i), summed in the order given. Terms with
// w(x) == 0 are skipped before the exponential so large |x| outside the
// support can never overflow.
double weighted_transform(const std::vector<double>& values, double rho,
                          const WeightFunction& w);

struct MuEstimate {
  double value = 0.0;        // in [0, big_m]
  bool bracket_found = false;
  int iterations = 0;
  double w_n_at_zero = 0.0;  // diagnostic
};

// Leftmost root of the transform on [0, big_m], bisection to tol. Degenerate
// signs clamp to the nearer boundary: transform positive at 0 -> 0, negative
// at big_m -> big_m, both with bracket_found = false. The sample is sorted
// internally, so the result is exactly permutation invariant.
MuEstimate estimate_mu(const std::vector<double>& values, const WeightFunction& w,
                       double big_m = 10.0, double tol = 1e-10);

}  // namespace nvmix
