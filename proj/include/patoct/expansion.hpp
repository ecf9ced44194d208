#pragma once

#include <Eigen/Dense>
#include <vector>

#include "patoct/hermite.hpp"
#include "patoct/quadrature.hpp"

namespace patoct {

// Tensor-product Gauss-Legendre grid; one rule per axis.
struct TensorGrid {
    std::vector<QuadRule> axes;
};

// Coefficient tensor of a Hermite-function expansion, rank 1..3, stored flat
// in row-major order (last axis fastest).  When rank >= 2 axis 0 is the
// frequency axis by convention.
class HermiteExpansion {
public:
    HermiteExpansion() = default;
    explicit HermiteExpansion(std::vector<BasisSpec> bases);

    int rank() const { return static_cast<int>(bases_.size()); }
    const std::vector<BasisSpec>& bases() const { return bases_; }
    Eigen::Index size() const { return c_.size(); }

    Eigen::VectorXd& coeffs() { return c_; }
    const Eigen::VectorXd& coeffs() const { return c_; }

    double& at(int i) { return c_[i]; }
    double at(int i) const { return c_[i]; }
    double& at(int i, int j) { return c_[i * bases_[1].n + j]; }
    double at(int i, int j) const { return c_[i * bases_[1].n + j]; }
    double& at(int i, int j, int k) { return c_[(i * bases_[1].n + j) * bases_[2].n + k]; }
    double at(int i, int j, int k) const { return c_[(i * bases_[1].n + j) * bases_[2].n + k]; }

private:
    std::vector<BasisSpec> bases_;
    Eigen::VectorXd c_;
};

// Projection of sampled values (flat row-major over the tensor grid) onto the
// Hermite basis by per-axis Gauss-Legendre quadrature.  A dilated axis
// (dilation sigma) carries the change-of-variables Jacobian sigma.
// Preconditions: per-axis node count >= 4 * (n-1), basis size <= 64.
HermiteExpansion project(const Eigen::VectorXd& samples, const TensorGrid& grid,
                         const std::vector<BasisSpec>& bases);

// Evaluate an expansion on a tensor grid of arbitrary points (flat row-major
// output; degrees swept by the stable recurrence).
Eigen::VectorXd eval_expansion(const HermiteExpansion& f,
                               const std::vector<Eigen::VectorXd>& points);

// Basis evaluation matrix E(i,k) = h_k(sigma * x_i), k < n.
Eigen::MatrixXd basis_matrix(const BasisSpec& b, const Eigen::VectorXd& x);

}  // namespace patoct
