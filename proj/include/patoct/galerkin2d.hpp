#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "patoct/expansion.hpp"
#include "patoct/quadrature.hpp"

namespace patoct {

// In-plane detection direction theta = (0, theta2, theta3) on the upper unit
// hemisphere (theta3 > 0).  The assembled tensor depends on theta only
// through theta2 and tilde3 = theta3 + 1.
struct DetectionDirection {
    double theta2 = 0.0;
    double theta3 = 1.0;
    double tilde3() const { return theta3 + 1.0; }
};

// Enforces theta1 = 0 (implicit in the type), theta3 > 0 and unit length to
// 1e-12; violations raise std::domain_error.
void validate_direction(const DetectionDirection& theta);

// Complex rank-3 tensor over (k, l, mu) with the last axis fastest; sized
// N x N x (5N-4) by the assembly routines.
struct Tensor3C {
    int n1 = 0, n2 = 0, n3 = 0;
    Eigen::VectorXcd v;

    Tensor3C() = default;
    Tensor3C(int a, int b, int c) : n1(a), n2(b), n3(c), v(Eigen::VectorXcd::Zero(a * b * c)) {}
    std::complex<double>& at(int k, int l, int mu) { return v[(k * n2 + l) * n3 + mu]; }
    std::complex<double> at(int k, int l, int mu) const { return v[(k * n2 + l) * n3 + mu]; }
};

// Stacked K-direction system D zeta = d for the unknown vector
// zeta = (gamma_{0,0}, ..., gamma_{0,N-1}, gamma_{1,0}, ...) in R^{N^2}.
struct System2D {
    int order = 0;
    std::vector<DetectionDirection> directions;
    Eigen::MatrixXcd D;  // K(5N-4) x N^2
    Eigen::VectorXcd d;  // K(5N-4)
};

// Window-restricted Galerkin tensor
//   B_{k,l,mu}(theta) = int_W e^{w^2 tilde3/2} h_mu(w) K_{k,l}(theta, w) dw,
// over (k,l) < N and mu <= 5(N-1), evaluated on the same composite rule as
// assemble_rhs_theta so system and moment vector discretise one equation.
// K_{k,l} are the analytic kernel columns of kernel_matrix_2d.  p is the
// rank-3 PAT coefficient tensor (frequency x y2 x y3, all dilation 1);
// p_tilde its Hilbert partner along axis 0.
Tensor3C assemble_B(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                    const DetectionDirection& theta, int N, double w_lo, double w_hi);

// Whole-line coefficient reduction with (theta2, tilde3) free:
//   B_{k,l,mu} = sum_{a,n,u} (pt_{a,n,u} + i p_{a,n,u})
//     sum_r beta_{k,n,r} zeta_{k+n-2r} theta2^{k+n-2r}
//     sum_q beta_{l,u,q} zeta_{l+u-2q} tilde3^{l+u-2q}
//     (s!/2^s) sum_j 1/(j!(s-2j)! alpha_{s-2j}) 1_{[|a-s+2j|, a+s-2j]}(mu)
//     beta_{a,s-2j,(a+s-2j-mu)/2},        s = k+n+l+u-2r-2q.
// Every entry is a polynomial of degree <= 2(N-1) in each argument, which
// the tests pin down by exact interpolation; for unit directions it is the
// W -> R limit of assemble_B and serves as an independent cross-check at
// low orders where the window tails vanish.
Tensor3C assemble_B_raw(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                        double theta2, double tilde3, int N);

// Weighted moments m_mu = int_W e^{w^2 tilde3 / 2} m(w) h_mu(w) dw for
// mu < 5N-4, on the fixed 2048-node composite rule over W; the trace is
// cubic-spline interpolated (exact when sampled at the rule's own nodes).
// Preconditions: grid strictly increasing, inside [w_lo, w_hi], at least
// 4*(5N-4) nodes.
Eigen::VectorXcd assemble_rhs_theta(const Eigen::VectorXd& omega, const Eigen::VectorXcd& m,
                                    const DetectionDirection& theta, double w_lo, double w_hi,
                                    int N);

// The quadrature rule assemble_rhs_theta integrates on (64 panels x 32).
QuadRule rhs_quadrature_rule_2d(double w_lo, double w_hi);

// Flatten B to C(theta) with rows mu and columns (k,l) in row-major order,
// i.e. column index k*N + l.
Eigen::MatrixXcd flatten_C(const Tensor3C& b);

// Stack per-direction blocks vertically into D zeta = d.
System2D stack_D(const std::vector<Tensor3C>& b_list,
                 const std::vector<Eigen::VectorXcd>& m_list,
                 const std::vector<DetectionDirection>& directions);

// Analytic kernel columns: entry (i, k*N+l) = K_{k,l}(theta, omega_i) with
//   K_{k,l}(theta, w) = sum_{a,n,u} (pt+ip)_{a,n,u} h_a(w)
//     sum_r beta_{k,n,r} zeta_{k+n-2r} e^{-(w theta2)^2/4} (w theta2)^{k+n-2r}
//     sum_q beta_{l,u,q} zeta_{l+u-2q} e^{-(w tilde3)^2/4} (w tilde3)^{l+u-2q};
// synthetic data in the truncated span is m(theta, .) = K * vec(gamma).
Eigen::MatrixXcd kernel_matrix_2d(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                                  int N, const DetectionDirection& theta,
                                  const Eigen::VectorXd& omega);

// Brute-force triple-quadrature cross-check of assemble_B (tests only):
//   B~_{k,l,mu} = int int int e^{w^2 tilde3/2} h_mu(w) (H[p]+ip)(w,y2,y3)
//                 e^{-i w (theta2 y2 + tilde3 y3)} h_k(y2) h_l(y3) dy2 dy3 dw.
// The y integrals are evaluated per frequency node so the kernel's own
// Gaussian decay in w tempers the e^{w^2 tilde3/2} weight.  N <= 4.
Tensor3C oracle_assemble_B(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                           const DetectionDirection& theta, int N, const QuadRule& omega_rule,
                           const QuadRule& y2_rule, const QuadRule& y3_rule);

}  // namespace patoct
