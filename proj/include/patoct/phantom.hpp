#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace patoct {

enum class PhantomField { gamma, im_psi };

// Closed-form ground truth: gamma = 1/Grueneisen and the imaginary
// susceptibility profile, with the generation boxes (Omega for the spatial
// support of psi, Omega_L for gamma, W for the frequency window).  Boxes are
// intervals, squared in two dimensions.
struct Phantom {
    std::string id;
    int dim = 1;  // spatial dimensions of gamma (1 or 2)
    std::function<double(double, double)> gamma;           // (x, y); y ignored in 1-D
    std::function<double(double, double, double)> im_psi;  // (w, x, y); y ignored in 1-D
    double omega_lo = 0.0, omega_hi = 0.0;      // Omega
    double support_lo = 0.0, support_hi = 0.0;  // Omega_L
    double w_lo = 0.0, w_hi = 0.0;              // W
};

// The five worked examples; unknown ids raise std::domain_error.
Phantom phantom_by_id(const std::string& id);

// Evaluate a field on a list of points, one row each: columns (x[, y]) for
// gamma and (w, x[, y]) for im_psi.
Eigen::VectorXd phantom_eval(const Phantom& ph, PhantomField which, const Eigen::MatrixXd& pts);

// Largest |field| found on a scan ring outside the stated box enlarged by
// `margin` (spatial axes only; im_psi is scanned across the frequency
// window).  The Gaussian-tailed phantoms are not compactly supported, so the
// support invariants are asserted as decay beyond an enlarged box.
double support_leakage(const Phantom& ph, PhantomField which, double margin);

}  // namespace patoct
