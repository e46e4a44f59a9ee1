#include "nvmix/mu_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nvmix {

WeightFunction WeightFunction::sine_window() {
  WeightFunction w;
  w.support_radius = std::numbers::pi;
  w.tag = "sine";
  w.fn = [](double x) { return std::fabs(x) <= std::numbers::pi ? -std::sin(x) : 0.0; };
  return w;
}

double weighted_transform(const std::vector<double>& values, double rho,
                          const WeightFunction& w) {
  double acc = 0.0;
  for (double x : values) {
    const double wx = w(x);
    if (wx == 0.0) continue;
    acc += std::exp(-rho * x) * wx;
  }
  return acc / static_cast<double>(values.size());
}

MuEstimate estimate_mu(const std::vector<double>& values, const WeightFunction& w,
                       double big_m, double tol) {
  if (values.empty()) throw std::invalid_argument("estimate_mu: empty sample");
  if (!(big_m > 0.0)) throw std::invalid_argument("estimate_mu: big_m must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("estimate_mu: tol must be positive");

  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());

  MuEstimate est;
  est.w_n_at_zero = weighted_transform(sorted, 0.0, w);

  if (est.w_n_at_zero > 0.0) {
    // No positive root exists (the transform is nondecreasing); the root was
    // crowded out by sampling noise near 0, so clamp to the near boundary.
    est.value = 0.0;
    est.bracket_found = false;
    return est;
  }
  if (est.w_n_at_zero == 0.0) {
    est.value = 0.0;
    est.bracket_found = true;
    return est;
  }
  if (weighted_transform(sorted, big_m, w) < 0.0) {
    est.value = big_m;
    est.bracket_found = false;
    return est;
  }

  // Invariant: transform < 0 at lo, >= 0 at hi; converges to the leftmost
  // point where the transform reaches 0.
  double lo = 0.0, hi = big_m;
  int iter = 0;
  while (hi - lo > tol && iter < 200) {
    const double mid = 0.5 * (lo + hi);
    if (weighted_transform(sorted, mid, w) >= 0.0)
      hi = mid;
    else
      lo = mid;
    ++iter;
  }
  est.value = hi;
  est.bracket_found = true;
  est.iterations = iter;
  return est;
}

}  // namespace nvmix
