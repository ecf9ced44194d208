#include "patoct/expansion.hpp"

#include <stdexcept>
#include <string>

namespace patoct {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_basis(const BasisSpec& b) {
    if (b.n < 1 || b.n > kMaxBasisSize)
        throw std::invalid_argument("basis size " + std::to_string(b.n) + " outside [1," +
                                    std::to_string(kMaxBasisSize) + "]");
    if (b.dilation != 1.0 && b.dilation != 2.0)
        throw std::invalid_argument("basis dilation must be 1 or 2");
}

}  // namespace

HermiteExpansion::HermiteExpansion(std::vector<BasisSpec> bases) : bases_(std::move(bases)) {
    if (bases_.empty() || bases_.size() > 3)
        throw std::invalid_argument("HermiteExpansion: rank must be 1..3");
    Eigen::Index n = 1;
    for (const auto& b : bases_) {
        check_basis(b);
        n *= b.n;
    }
    c_ = Eigen::VectorXd::Zero(n);
}

Eigen::MatrixXd basis_matrix(const BasisSpec& b, const Eigen::VectorXd& x) {
    check_basis(b);
    Eigen::MatrixXd e(x.size(), b.n);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        e.row(i) = hermite_fn_all(b.n, b.dilation * x[i]).transpose();
    return e;
}

HermiteExpansion project(const Eigen::VectorXd& samples, const TensorGrid& grid,
                         const std::vector<BasisSpec>& bases) {
    const int rank = static_cast<int>(bases.size());
    if (rank < 1 || rank > 3 || grid.axes.size() != bases.size())
        throw std::invalid_argument("project: rank must be 1..3 and grid must match basis rank");
    Eigen::Index n_samples = 1;
    for (int ax = 0; ax < rank; ++ax) {
        check_basis(bases[ax]);
        if (grid.axes[ax].size() < 4 * (bases[ax].n - 1))
            throw std::invalid_argument("project: grid too coarse on axis " + std::to_string(ax) +
                                        " (need >= 4*max_degree nodes)");
        n_samples *= grid.axes[ax].size();
    }
    if (samples.size() != n_samples)
        throw std::invalid_argument("project: sample count does not match grid");

    // Per-axis quadrature matrices P(k,i) = sigma * w_i * h_k(sigma * x_i).
    std::vector<Eigen::MatrixXd> proj(rank);
    for (int ax = 0; ax < rank; ++ax) {
        const auto& rule = grid.axes[ax];
        proj[ax] = (basis_matrix(bases[ax], rule.x).array().colwise() * rule.w.array())
                       .matrix()
                       .transpose() *
                   bases[ax].dilation;
    }

    HermiteExpansion out(bases);
    if (rank == 1) {
        out.coeffs() = proj[0] * samples;
        return out;
    }
    if (rank == 2) {
        const Eigen::Index m0 = grid.axes[0].size(), m1 = grid.axes[1].size();
        Eigen::Map<const RowMajorMatrix> f(samples.data(), m0, m1);
        RowMajorMatrix c = proj[0] * f * proj[1].transpose();
        out.coeffs() = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
        return out;
    }
    const Eigen::Index m0 = grid.axes[0].size(), m1 = grid.axes[1].size(), m2 = grid.axes[2].size();
    const Eigen::Index n0 = bases[0].n, n1 = bases[1].n, n2 = bases[2].n;
    // Contract axis 2, then axis 1 block-wise, then axis 0.
    Eigen::Map<const RowMajorMatrix> f(samples.data(), m0 * m1, m2);
    RowMajorMatrix g = f * proj[2].transpose();  // (m0*m1) x n2
    RowMajorMatrix h(m0, n1 * n2);
    for (Eigen::Index i0 = 0; i0 < m0; ++i0) {
        RowMajorMatrix block = proj[1] * g.middleRows(i0 * m1, m1);  // n1 x n2
        h.row(i0) = Eigen::Map<const Eigen::RowVectorXd>(block.data(), n1 * n2);
    }
    RowMajorMatrix c = proj[0] * h;  // n0 x (n1*n2)
    out.coeffs() = Eigen::Map<const Eigen::VectorXd>(c.data(), n0 * n1 * n2);
    return out;
}

Eigen::VectorXd eval_expansion(const HermiteExpansion& f,
                               const std::vector<Eigen::VectorXd>& points) {
    const int rank = f.rank();
    if (static_cast<int>(points.size()) != rank)
        throw std::invalid_argument("eval_expansion: point-grid rank mismatch");
    std::vector<Eigen::MatrixXd> e(rank);
    for (int ax = 0; ax < rank; ++ax) e[ax] = basis_matrix(f.bases()[ax], points[ax]);

    if (rank == 1) return e[0] * f.coeffs();
    if (rank == 2) {
        const Eigen::Index n0 = f.bases()[0].n, n1 = f.bases()[1].n;
        Eigen::Map<const RowMajorMatrix> c(f.coeffs().data(), n0, n1);
        RowMajorMatrix v = e[0] * c * e[1].transpose();
        return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    }
    const Eigen::Index n0 = f.bases()[0].n, n1 = f.bases()[1].n, n2 = f.bases()[2].n;
    const Eigen::Index m0 = points[0].size(), m1 = points[1].size(), m2 = points[2].size();
    Eigen::Map<const RowMajorMatrix> c(f.coeffs().data(), n0 * n1, n2);
    RowMajorMatrix t = c * e[2].transpose();  // (n0*n1) x m2
    RowMajorMatrix u(n0, m1 * m2);
    for (Eigen::Index k0 = 0; k0 < n0; ++k0) {
        RowMajorMatrix block = e[1] * t.middleRows(k0 * n1, n1);  // m1 x m2
        u.row(k0) = Eigen::Map<const Eigen::RowVectorXd>(block.data(), m1 * m2);
    }
    RowMajorMatrix v = e[0] * u;  // m0 x (m1*m2)
    return Eigen::Map<const Eigen::VectorXd>(v.data(), m0 * m1 * m2);
}

}  // namespace patoct
