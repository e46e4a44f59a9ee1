#pragma once

// Composite Gauss-Legendre quadrature: cached rules, flat panel meshes, and a
// panel-doubling driver for smooth integrands.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nvmix {

// Nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// order in [2, 64]; built once per order, cached, safe to call from any thread.
const GaussRule& gauss_rule(int order);

// Quadrature nodes with weights accumulated panel by panel; summation order is
// the construction order, so results are independent of how callers thread.
struct QuadMesh {
  std::vector<double> nodes;
  std::vector<double> weights;

  void add_panel(double a, double b, int order);
  std::size_t size() const { return nodes.size(); }

  template <class F>
  auto accumulate(F&& f) const {
    using R = decltype(f(0.0) * 0.0);
    R acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += f(nodes[i]) * weights[i];
    return acc;
  }
};

namespace detail {
template <class F>
auto panel_pass(F& f, double a, double b, int panels, int order) {
  const GaussRule& r = gauss_rule(order);
  using R = decltype(f(0.0) * 0.0);
  R acc{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += f(mid + half * r.x[i]) * (half * r.w[i]);
  }
  return acc;
}
}  // namespace detail

// Doubles the panel count until two successive refinements agree to rel_tol
// (plus an optional absolute floor for integrals that cancel to ~0).
template <class F>
auto integrate_adaptive(F&& f, double a, double b, double rel_tol, int order = 16,
                        int max_levels = 18, double abs_floor = 0.0) {
  using R = decltype(f(0.0) * 0.0);
  if (!(b > a)) return R{};
  int panels = 1;
  R prev = detail::panel_pass(f, a, b, panels, order);
  for (int level = 0; level < max_levels; ++level) {
    panels *= 2;
    R cur = detail::panel_pass(f, a, b, panels, order);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + abs_floor) return cur;
    prev = cur;
  }
  throw std::runtime_error("integrate_adaptive: no convergence");
}

// Window [tl, tr] outside of which |integrand(t)| falls below drop * peak.
// Scans [-60, 60]; intended for log-axis substitutions of decaying integrands.
std::pair<double, double> decay_window(const std::function<double(double)>& abs_integrand,
                                       double drop = 1e-18);

// integral over (0, inf) via x = e^t; f must decay at 0+ and at infinity.
double integrate_positive_axis(const std::function<double(double)>& f, double rel_tol);
std::complex<double> integrate_positive_axis_complex(
    const std::function<std::complex<double>(double)>& f, double rel_tol);

}  // namespace nvmix
