#pragma once

#include <Eigen/Dense>
#include <vector>

namespace patoct {

// Hard cap on the polynomial degree any evaluation routine accepts.  Basis
// sizes are capped separately (kMaxBasisSize); test-function rows of the
// Galerkin systems reach degree 5*(N-1), hence the larger evaluation cap.
inline constexpr int kMaxEvalDegree = 400;
inline constexpr int kMaxBasisSize = 64;

enum class AxisRole { frequency, space };

// One expansion axis: functions h_k(dilation * x), k = 0..n-1.
struct BasisSpec {
    int n = 0;
    double dilation = 1.0;  // 1 or 2
    AxisRole role = AxisRole::space;
};

// Physicists' Hermite polynomial H_k, three-term recurrence.
double hermite_h(int k, double x);

// alpha_k = (2^k k! sqrt(pi))^{-1/2}, evaluated through lgamma.
double hermite_alpha(int k);

// Orthonormal Hermite function h_k(x) = alpha_k H_k(x) exp(-x^2/2), by the
// normalized recurrence h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}.
double hermite_fn(int k, double x);

// h_0..h_{n-1} at x in one sweep.
Eigen::VectorXd hermite_fn_all(int n, double x);

// Linearization weight beta_{k,l,m} in
//   h_k h_l = exp(-x^2/2) sum_{m=0}^{min(k,l)} beta_{k,l,m} h_{k+l-2m}.
double feldheim_beta(int k, int l, int m);

struct CoeffTerm {
    int degree;
    double weight;
};
using CoeffList = std::vector<CoeffTerm>;

// The three classical expansions, returned as (degree, weight) lists:
//   product_expand(k,l):  h_k h_l = exp(-x^2/2) sum_m beta_{k,l,m} h_{k+l-2m}
//   power_expand(k):      w^k = (k!/2^k) exp(w^2/2) sum_q h_{k-2q}(w) / (q!(k-2q)! alpha_{k-2q})
//   shift_expand(k,y):    H_k(x+y) = sum_m binom(k,m) (2y)^{k-m} H_m(x)
//   scale_expand(k,rho):  H_k(rho x) = sum_i rho^{k-2i} (rho^2-1)^i k!/(i!(k-2i)!) H_{k-2i}(x)
CoeffList product_expand(int k, int l);
CoeffList power_expand(int k);
CoeffList shift_expand(int k, double y);
CoeffList scale_expand(int k, double rho);

}  // namespace patoct
