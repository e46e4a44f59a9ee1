#include "nvmix/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>

#include "nvmix/complex_special.hpp"

namespace nvmix::kernels {

namespace {

// Per-slot computations shared by the parallel and serial drivers; each slot
// accumulates in a fixed order, which is what makes the parallel results
// bitwise reproducible.

cd ecf_slot(const std::vector<double>& values, double u) {
  double re = 0.0, im = 0.0;
  for (double x : values) {
    const double a = u * x;
    re += std::cos(a);
    im += std::sin(a);
  }
  const double n = static_cast<double>(values.size());
  return cd(re / n, im / n);
}

struct ProfileTables {
  std::vector<cd> log_psi;    // log of the characteristic exponent per u node
  std::vector<cd> psi_deriv;  // its derivative per u node
};

ProfileTables make_tables(const std::vector<double>& u_nodes, double mu) {
  ProfileTables t;
  t.log_psi.resize(u_nodes.size());
  t.psi_deriv.resize(u_nodes.size());
  for (std::size_t i = 0; i < u_nodes.size(); ++i) {
    const double u = u_nodes[i];
    t.log_psi[i] = std::log(cd(0.5 * u * u, -mu * u));
    t.psi_deriv[i] = cd(u, -mu);
  }
  return t;
}

cd profile_slot(const std::vector<cd>& cf_on_u, const std::vector<double>& u_weights,
                const ProfileTables& t, double gamma, double v, bool conjugated) {
  const cd zm1(-gamma, -v);  // z - 1 with z = 1 - gamma - i v
  cd acc = 0.0;
  if (conjugated) {
    for (std::size_t i = 0; i < u_weights.size(); ++i)
      acc += u_weights[i] * std::conj(cf_on_u[i]) * std::exp(zm1 * std::conj(t.log_psi[i])) *
             std::conj(t.psi_deriv[i]);
  } else {
    for (std::size_t i = 0; i < u_weights.size(); ++i)
      acc += u_weights[i] * cf_on_u[i] * std::exp(zm1 * t.log_psi[i]) * t.psi_deriv[i];
  }
  return acc / gamma_fn(cd(1.0 - gamma, -v));
}

void invert_slot(const std::vector<cd>& profile, const std::vector<double>& v_nodes,
                 const std::vector<double>& v_weights, double gamma, double x, double& out_re,
                 double& out_im_abs) {
  const double lx = std::log(x);
  const double radial = std::exp(-gamma * lx);
  cd acc = 0.0;
  for (std::size_t j = 0; j < v_nodes.size(); ++j)
    acc += v_weights[j] * profile[j] * std::polar(radial, -v_nodes[j] * lx);
  constexpr double inv_two_pi = 1.0 / (2.0 * std::numbers::pi);
  out_re = acc.real() * inv_two_pi;
  out_im_abs = std::fabs(acc.imag()) * inv_two_pi;
}

}  // namespace

void ecf_table(const std::vector<double>& values, const std::vector<double>& u_nodes,
               std::vector<cd>& out) {
  out.resize(u_nodes.size());
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(u_nodes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) out[j] = ecf_slot(values, u_nodes[j]);
}

void mellin_profile(const std::vector<cd>& cf_on_u, const std::vector<double>& u_nodes,
                    const std::vector<double>& u_weights, double mu, double gamma,
                    const std::vector<double>& v_nodes, bool conjugate_positive_side,
                    std::vector<cd>& out) {
  const ProfileTables tables = make_tables(u_nodes, mu);
  out.resize(v_nodes.size());
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(v_nodes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    const bool conj_side = conjugate_positive_side && v_nodes[j] > 0.0;
    out[j] = profile_slot(cf_on_u, u_weights, tables, gamma, v_nodes[j], conj_side);
  }
}

void invert_grid(const std::vector<cd>& profile, const std::vector<double>& v_nodes,
                 const std::vector<double>& v_weights, double gamma,
                 const std::vector<double>& grid, std::vector<double>& out_re,
                 std::vector<double>& out_im_abs) {
  out_re.resize(grid.size());
  out_im_abs.resize(grid.size());
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i)
    invert_slot(profile, v_nodes, v_weights, gamma, grid[i], out_re[i], out_im_abs[i]);
}

namespace serial {

void ecf_table(const std::vector<double>& values, const std::vector<double>& u_nodes,
               std::vector<cd>& out) {
  out.resize(u_nodes.size());
  for (std::size_t j = 0; j < u_nodes.size(); ++j) out[j] = ecf_slot(values, u_nodes[j]);
}

void mellin_profile(const std::vector<cd>& cf_on_u, const std::vector<double>& u_nodes,
                    const std::vector<double>& u_weights, double mu, double gamma,
                    const std::vector<double>& v_nodes, bool conjugate_positive_side,
                    std::vector<cd>& out) {
  const ProfileTables tables = make_tables(u_nodes, mu);
  out.resize(v_nodes.size());
  for (std::size_t j = 0; j < v_nodes.size(); ++j) {
    const bool conj_side = conjugate_positive_side && v_nodes[j] > 0.0;
    out[j] = profile_slot(cf_on_u, u_weights, tables, gamma, v_nodes[j], conj_side);
  }
}

void invert_grid(const std::vector<cd>& profile, const std::vector<double>& v_nodes,
                 const std::vector<double>& v_weights, double gamma,
                 const std::vector<double>& grid, std::vector<double>& out_re,
                 std::vector<double>& out_im_abs) {
  out_re.resize(grid.size());
  out_im_abs.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    invert_slot(profile, v_nodes, v_weights, gamma, grid[i], out_re[i], out_im_abs[i]);
}

}  // namespace serial

}  // namespace nvmix::kernels
