#pragma once

#include <Eigen/Dense>
#include <complex>

#include "patoct/expansion.hpp"

namespace patoct {

// Convention used throughout: H[f](w) = (1/pi) PV int f(t)/(t - w) dt.

// S_{k,m} = int sign(x) h_k(x) h_m(x) dx, nonzero only for odd k+m; the
// half-line integral is evaluated by 200-node Gauss-Legendre on [0,12].
Eigen::MatrixXd sign_overlap_matrix(int n);

// Coefficient map of the Hilbert transform: f = sum f_m h_m maps to
// H[f] ~ sum (T f)_k h_k with T_{k,m} = Re[(-i)^{k-m+1}] S_{k,m}:
// -1 for k-m = 1 mod 4, +1 for k-m = 3 mod 4, 0 for even k-m.  T is
// antisymmetric, as the matrix of a skew-adjoint operator must be.
Eigen::MatrixXd hilbert_coeff_matrix(const Eigen::MatrixXd& s);

// Apply the coefficient Hilbert transform along axis 0 (the frequency axis).
HermiteExpansion hilbert_coeffs(const HermiteExpansion& f, const Eigen::MatrixXd& s);

// int exp(-x^2/2) h_k(x) exp(-i w x) dx = zeta_k exp(-w^2/4) w^k with
// zeta_k = sqrt(pi) (-i)^k alpha_k.
std::complex<double> lemma1_zeta(int k);
std::complex<double> lemma1_kernel(int k, double w);

// Principal-value Hilbert transform on a uniform grid.  Output nodes must
// coincide with fine-grid nodes at least two nodes away from either end.
// Scheme: punctured trapezoid of the difference quotient (symmetric pairing
// around the singular node), analytic PV log term, restored singular-node
// term h*f' (4th-order stencil) and the h^2/12 Euler-Maclaurin end correction.
Eigen::MatrixXd pv_hilbert_matrix(const Eigen::VectorXd& fine, const Eigen::VectorXd& out);

// Uniform fine grid embedding a uniform data grid: spacing h_data/ratio
// (ratio a power of two so embedded nodes match bitwise), extended by at
// least `extension` on both sides.  Returns the grid and the index of the
// first data node via `offset`.
Eigen::VectorXd pv_extend_grid(const Eigen::VectorXd& data, int ratio, double extension,
                               int* offset);

}  // namespace patoct
