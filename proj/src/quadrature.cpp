#include "nvmix/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace nvmix {

namespace {

// Newton iteration on the Legendre recurrence; standard gauleg construction.
GaussRule build_rule(int order) {
  GaussRule r;
  r.x.resize(order);
  r.w.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[order - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[order - 1 - i] = r.w[i];
  }
  if (order % 2 == 1) r.x[order / 2] = 0.0;  // exact midpoint for odd orders
  return r;
}

std::map<int, GaussRule>& rule_cache() {
  static std::map<int, GaussRule> cache;
  return cache;
}
std::mutex rule_mutex;

}  // namespace

const GaussRule& gauss_rule(int order) {
  if (order < 2 || order > 64) throw std::invalid_argument("gauss_rule: order out of range");
  std::lock_guard<std::mutex> lock(rule_mutex);
  auto& cache = rule_cache();
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;  // map nodes are stable; reference outlives the lock
}

void QuadMesh::add_panel(double a, double b, int order) {
  if (!(b > a)) return;
  const GaussRule& r = gauss_rule(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    nodes.push_back(mid + half * r.x[i]);
    weights.push_back(half * r.w[i]);
  }
}

std::pair<double, double> decay_window(const std::function<double(double)>& abs_integrand,
                                       double drop) {
  constexpr double kLim = 60.0;
  constexpr double kStep = 0.5;
  double peak = 0.0;
  double tpeak = 0.0;
  for (double t = -kLim; t <= kLim; t += kStep) {
    const double v = abs_integrand(t);
    if (v > peak) {
      peak = v;
      tpeak = t;
    }
  }
  if (peak <= 0.0) throw std::runtime_error("decay_window: integrand vanishes on the scan range");
  const double cut = drop * peak;
  double tl = tpeak, tr = tpeak;
  while (tl > -kLim && abs_integrand(tl) > cut) tl -= kStep;
  while (tr < kLim && abs_integrand(tr) > cut) tr += kStep;
  return {tl, tr};
}

double integrate_positive_axis(const std::function<double(double)>& f, double rel_tol) {
  auto g = [&](double t) { return f(std::exp(t)) * std::exp(t); };
  auto [tl, tr] = decay_window([&](double t) { return std::fabs(g(t)); });
  return integrate_adaptive(g, tl, tr, rel_tol);
}

std::complex<double> integrate_positive_axis_complex(
    const std::function<std::complex<double>(double)>& f, double rel_tol) {
  auto g = [&](double t) { return f(std::exp(t)) * std::exp(t); };
  auto [tl, tr] = decay_window([&](double t) { return std::abs(g(t)); });
  return integrate_adaptive(g, tl, tr, rel_tol);
}

}  // namespace nvmix
