#pragma once

#include <Eigen/Dense>
#include <complex>

#include "patoct/expansion.hpp"
#include "patoct/quadrature.hpp"

namespace patoct {

// Depth-dependent (1-D) Galerkin system A gamma = m for gamma(y) expanded in
// h_j(2y).  Rows are the weighted frequency test functions s = 0..3(N-1);
// columns the depth degrees j = 0..N-1, so A is (3N-2) x N.
//
// A is built from the PAT coefficient pair (p, H[p]) alone, as the weighted
// window moments of the analytic kernel columns,
//   A_{s,j} = int_W 2 e^{w^2/4} h_s(w) K_j(w) dw,
// integrated on the same composite rule as assemble_rhs_m so that model and
// data moments are evaluated by an identical functional.  (The unwindowed
// coefficient reduction of the kernel lives in assemble_A_fullline; its rows
// differ from the W moments once h_s carries mass outside W.)
Eigen::MatrixXcd assemble_A(const HermiteExpansion& p, const HermiteExpansion& p_tilde, int N,
                            double w_lo, double w_hi);

// Whole-line coefficient reduction of the same Galerkin matrix:
//   A_{s,j} = sum_{k,l} (pt_{k,l} + i p_{k,l}) sum_n beta_{j,l,n} zeta_D
//             (D!/2^D) sum_r 1/(r! q! alpha_q) beta_{k,q,(k+q-s)/2},
// with D = j+l-2n, q = D-2r, and the last factor present only when k+q-s is
// an even number in [0, 2 min(k,q)].  Equals the w_lo -> -inf, w_hi -> +inf
// limit of assemble_A; kept as an independent cross-check of the quadrature
// path (tests compare the two on low orders, where the window tails vanish).
Eigen::MatrixXcd assemble_A_fullline(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                                     int N);

// Right-hand side m_s = int_W 2 e^{w^2/4} m(w) h_s(w) dw, s < 3N-2, by the
// fixed 1024-node composite Gauss-Legendre rule on W.  The trace is
// cubic-spline interpolated onto the rule; sampling the trace at the rule's
// own nodes (rhs_quadrature_rule_1d) makes the interpolation exact.
// Preconditions: grid strictly increasing, inside [w_lo, w_hi], and at least
// 4*(3N-2) nodes.
Eigen::VectorXcd assemble_rhs_m(const Eigen::VectorXd& omega, const Eigen::VectorXcd& m,
                                double w_lo, double w_hi, int N);

// The quadrature rule assemble_rhs_m integrates on (32 panels x 32 nodes).
QuadRule rhs_quadrature_rule_1d(double w_lo, double w_hi);

// Kernel columns K_j(w) = int (H[p]+ip)(w,y) e^{-2iwy} h_j(2y) dy evaluated
// analytically; entry (i,j) = K_j(omega_i).  Synthetic data in the truncated
// span is m = K * gamma.
Eigen::MatrixXcd kernel_matrix_1d(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                                  int N, const Eigen::VectorXd& omega);

// Brute-force double-quadrature cross-check of assemble_A (tests only):
//   A~_{s,j} = 2 int int e^{w^2/4} h_s(w) (H[p]+ip)(w,y) e^{-2iwy} h_j(2y) dy dw
// over the supplied tensor rules.  Cost grows as grid^2 N^2; N <= 6.
Eigen::MatrixXcd oracle_assemble_A(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                                   int N, const QuadRule& omega_rule, const QuadRule& y_rule);

}  // namespace patoct
