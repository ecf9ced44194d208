#pragma once

#include <Eigen/Dense>
#include <vector>

namespace patoct {

// Tikhonov-regularized least squares for real unknowns and complex systems:
//   (Re(G)^T Re(G) + Im(G)^T Im(G) + lambda I) x = Re(G)^T Re(g) + Im(G)^T Im(g),
// solved by a direct Cholesky factorization of the normal matrix.
struct TikhonovSolution {
    Eigen::VectorXd x;
    double residual_norm = 0.0;  // ||G x - g||_2
    double solution_norm = 0.0;  // ||x||_2
};
TikhonovSolution solve_tikhonov_full(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& g,
                                     double lambda);
Eigen::VectorXd solve_tikhonov(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& g,
                               double lambda);

// Discrete L-curve over a lambda grid: solve for every lambda, take the
// three-point circumscribed-circle (Menger) curvature of (log residual,
// log solution) and return the interior grid point of largest convex
// curvature.  A degenerate curve falls back to the median lambda and sets
// the flag.
struct LCurve {
    Eigen::VectorXd lambda;
    Eigen::VectorXd residual_norm, solution_norm, curvature;
    int best_index = -1;
    bool degenerate = false;
    double lambda_star() const { return lambda[best_index]; }
};
LCurve select_lambda_lcurve(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& g,
                            const Eigen::VectorXd& lambda_grid);

// n log-spaced values on [lo, hi], endpoints included.
Eigen::VectorXd log_lambda_grid(int n, double lo, double hi);

// Relative L2 error with tensor-product trapezoidal weights on the given
// axes (sizes must multiply to the field length; both fields flat row-major).
// A vanishing truth raises std::domain_error.
double error_metrics(const Eigen::VectorXd& field, const Eigen::VectorXd& truth,
                     const std::vector<Eigen::VectorXd>& axes);

// Field synthesis from a coefficient vector: in 1-D gamma(y) = sum x_j
// h_j(2y); in 2-D gamma(x,y) = sum x_{kN+l} h_k(x) h_l(y) (row-major).  The
// susceptibility field is recovered pointwise as Im chi(w, x) =
// p_noisy(w, x) * gamma(x) on the PAT grid.
struct FieldRequest {
    int mode = 1;   // spatial dimensions
    int order = 0;  // N
    bool clamp_negative = false;
    Eigen::VectorXd gamma_x, gamma_y;  // evaluation axes (gamma_y empty in 1-D)
    Eigen::VectorXd pat_omega, pat_x, pat_y;
    Eigen::VectorXd pat_noisy;  // flat row-major over (w, x[, y])
};
struct Fields {
    Eigen::VectorXd gamma;   // flat row-major over the gamma axes
    Eigen::VectorXd im_chi;  // flat row-major over the PAT grid
};
Fields reconstruct_fields(const Eigen::VectorXd& x, const FieldRequest& req);

}  // namespace patoct
