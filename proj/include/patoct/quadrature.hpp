#pragma once

#include <Eigen/Dense>

namespace patoct {

// Quadrature rule: nodes x (ascending) with weights w.
struct QuadRule {
    Eigen::VectorXd x;
    Eigen::VectorXd w;
    int size() const { return static_cast<int>(x.size()); }
};

// n-point Gauss-Legendre rule on [-1,1] (cached) or mapped to [a,b].
QuadRule gauss_legendre(int n);
QuadRule gauss_legendre(int n, double a, double b);

// Composite rule: `panels` equal subintervals of [a,b], `nodes_per_panel`
// Gauss-Legendre nodes on each.
QuadRule composite_gauss_legendre(int nodes_per_panel, int panels, double a, double b);

// Trapezoid weights for an arbitrary strictly increasing grid.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& x);

// Endpoint-inclusive uniform grid with n nodes on [a,b].
Eigen::VectorXd uniform_grid(int n, double a, double b);

}  // namespace patoct
