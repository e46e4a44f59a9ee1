// Benchmark of the OpenMP kernels against their serial references on a
// realistic workload. The parallel results must match the serial ones
// bit-for-bit; any difference is a bug and fails the run.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "nvmix/kernels.hpp"
#include "nvmix/mellin.hpp"
#include "nvmix/models.hpp"
#include "nvmix/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nvmix::cd;

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void report(const char* name, double serial_ms, double parallel_ms, double diff) {
  std::printf("%-16s %10.2f ms %10.2f ms %8.2fx %12.3g\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, diff);
}

}  // namespace

int main() {
  const std::size_t n = 20000;
  nvmix::RandomSource rng(42);
  const nvmix::MixtureModel model{0.5, nvmix::MixingModel::gig_model(nvmix::GigParams{})};
  const std::vector<double> sample = model.sample(rng, n);

  nvmix::EstimatorConfig cfg;
  cfg.gamma = 0.3;
  cfg.u_max = 20.0;
  cfg.v_max = 10.0;

  const nvmix::CharFunction cf = nvmix::CharFunction::from_sample({sample, "bench"});
  const nvmix::UMesh um = nvmix::build_u_mesh(cfg, cf.oscillation_scale(), model.mu);
  const nvmix::VMesh vm = nvmix::build_v_mesh(cfg);
  const std::vector<double> grid = nvmix::make_grid(0.2, 8.0, 0.02);

  std::printf("n = %zu, u nodes = %zu, v nodes = %zu, grid = %zu\n", n, um.nodes.size(),
              vm.nodes.size(), grid.size());
#ifdef _OPENMP
  std::printf("omp threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serial code\n");
#endif
  std::printf("%-16s %13s %13s %9s %12s\n", "kernel", "serial", "parallel", "speedup",
              "max |diff|");

  std::vector<cd> ecf_serial, ecf_parallel;
  auto t0 = std::chrono::steady_clock::now();
  nvmix::kernels::serial::ecf_table(sample, um.nodes, ecf_serial);
  const double ecf_s = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  nvmix::kernels::ecf_table(sample, um.nodes, ecf_parallel);
  const double ecf_p = ms_since(t0);
  const double ecf_diff = max_abs_diff(ecf_serial, ecf_parallel);
  report("ecf_table", ecf_s, ecf_p, ecf_diff);

  std::vector<cd> prof_serial, prof_parallel;
  t0 = std::chrono::steady_clock::now();
  nvmix::kernels::serial::mellin_profile(ecf_serial, um.nodes, um.weights, model.mu, cfg.gamma,
                                         vm.nodes, true, prof_serial);
  const double prof_s = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  nvmix::kernels::mellin_profile(ecf_serial, um.nodes, um.weights, model.mu, cfg.gamma, vm.nodes,
                                 true, prof_parallel);
  const double prof_p = ms_since(t0);
  const double prof_diff = max_abs_diff(prof_serial, prof_parallel);
  report("mellin_profile", prof_s, prof_p, prof_diff);

  std::vector<double> inv_serial, inv_parallel, imag_serial, imag_parallel;
  t0 = std::chrono::steady_clock::now();
  nvmix::kernels::serial::invert_grid(prof_serial, vm.nodes, vm.weights, cfg.gamma, grid,
                                      inv_serial, imag_serial);
  const double inv_s = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  nvmix::kernels::invert_grid(prof_serial, vm.nodes, vm.weights, cfg.gamma, grid, inv_parallel,
                              imag_parallel);
  const double inv_p = ms_since(t0);
  const double inv_diff =
      std::max(max_abs_diff(inv_serial, inv_parallel), max_abs_diff(imag_serial, imag_parallel));
  report("invert_grid", inv_s, inv_p, inv_diff);

  if (ecf_diff != 0.0 || prof_diff != 0.0 || inv_diff != 0.0) {
    std::printf("FAIL: parallel kernels are not bitwise identical to the serial references\n");
    return 1;
  }
  std::printf("parallel kernels match the serial references bit for bit\n");
  return 0;
}
