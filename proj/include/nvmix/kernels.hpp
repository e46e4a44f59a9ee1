#pragma once

// The three hot loops of the estimator, parallelized with OpenMP. Every loop
// writes disjoint output slots and keeps each slot's summation order fixed, so
// results are bitwise identical for any thread count; nvmix::kernels::serial
// holds plain single-threaded references used to test exactly that.

#include <complex>
#include <vector>

namespace nvmix::kernels {

using cd = std::complex<double>;

// out[j] = (1/n) sum_k exp(i u_j x_k).
void ecf_table(const std::vector<double>& values, const std::vector<double>& u_nodes,
               std::vector<cd>& out);

// Contour integral per v node, divided by Gamma(1 - gamma - i v). cf_on_u
// holds the characteristic function on the u mesh. Nodes with v > 0 use the
// conjugated kernel when conjugate_positive_side is set (plain otherwise,
// which is the mu == 0 convention).
void mellin_profile(const std::vector<cd>& cf_on_u, const std::vector<double>& u_nodes,
                    const std::vector<double>& u_weights, double mu, double gamma,
                    const std::vector<double>& v_nodes, bool conjugate_positive_side,
                    std::vector<cd>& out);

// out_re[i] = Re[(1/2pi) sum_j w_j profile_j x_i^{-gamma - i v_j}], and
// out_im_abs[i] the magnitude of the dropped imaginary part.
void invert_grid(const std::vector<cd>& profile, const std::vector<double>& v_nodes,
                 const std::vector<double>& v_weights, double gamma,
                 const std::vector<double>& grid, std::vector<double>& out_re,
                 std::vector<double>& out_im_abs);

namespace serial {
void ecf_table(const std::vector<double>& values, const std::vector<double>& u_nodes,
               std::vector<cd>& out);
void mellin_profile(const std::vector<cd>& cf_on_u, const std::vector<double>& u_nodes,
                    const std::vector<double>& u_weights, double mu, double gamma,
                    const std::vector<double>& v_nodes, bool conjugate_positive_side,
                    std::vector<cd>& out);
void invert_grid(const std::vector<cd>& profile, const std::vector<double>& v_nodes,
                 const std::vector<double>& v_weights, double gamma,
                 const std::vector<double>& grid, std::vector<double>& out_re,
                 std::vector<double>& out_im_abs);
}  // namespace serial

}  // namespace nvmix::kernels
