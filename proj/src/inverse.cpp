#include "patoct/inverse.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "patoct/expansion.hpp"
#include "patoct/quadrature.hpp"

namespace patoct {

namespace {

void check_system(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& g) {
    if (G.rows() == 0 || G.cols() == 0)
        throw std::invalid_argument("solve_tikhonov: empty system matrix");
    if (g.size() != G.rows())
        throw std::invalid_argument("solve_tikhonov: right-hand side length mismatch");
}

}  // namespace

TikhonovSolution solve_tikhonov_full(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& g,
                                     double lambda) {
    check_system(G, g);
    if (!(lambda > 0.0)) throw std::domain_error("solve_tikhonov: lambda must be positive");
    const Eigen::MatrixXd Gr = G.real(), Gi = G.imag();
    Eigen::MatrixXd normal = Gr.transpose() * Gr + Gi.transpose() * Gi;
    normal.diagonal().array() += lambda;
    const Eigen::VectorXd rhs = Gr.transpose() * g.real() + Gi.transpose() * g.imag();
    const Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("solve_tikhonov: Cholesky factorization failed (" +
                                 std::to_string(G.rows()) + "x" + std::to_string(G.cols()) +
                                 " system, lambda = " + std::to_string(lambda) + ")");
    TikhonovSolution s;
    s.x = llt.solve(rhs);
    s.residual_norm = (G * s.x.cast<std::complex<double>>() - g).norm();
    s.solution_norm = s.x.norm();
    return s;
}

Eigen::VectorXd solve_tikhonov(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& g,
                               double lambda) {
    return solve_tikhonov_full(G, g, lambda).x;
}

Eigen::VectorXd log_lambda_grid(int n, double lo, double hi) {
    if (n < 1 || !(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("log_lambda_grid: need n >= 1 and 0 < lo < hi");
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i)
        v[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / std::max(n - 1, 1));
    if (n > 1) {
        v[0] = lo;
        v[n - 1] = hi;
    }
    return v;
}

LCurve select_lambda_lcurve(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& g,
                            const Eigen::VectorXd& lambda_grid) {
    check_system(G, g);
    const int n = static_cast<int>(lambda_grid.size());
    if (n == 0) throw std::invalid_argument("select_lambda_lcurve: empty lambda grid");
    for (int i = 0; i < n; ++i) {
        if (!(lambda_grid[i] > 0.0))
            throw std::invalid_argument("select_lambda_lcurve: lambda values must be positive");
        if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
            throw std::invalid_argument("select_lambda_lcurve: lambda grid must be sorted");
    }
    if (n > 1 && (n < 5 || lambda_grid[n - 1] / lambda_grid[0] < 1e4 * (1.0 - 1e-9)))
        throw std::invalid_argument(
            "select_lambda_lcurve: grid must hold >= 5 points spanning >= 4 decades");

    LCurve lc;
    lc.lambda = lambda_grid;
    lc.residual_norm.resize(n);
    lc.solution_norm.resize(n);
    lc.curvature = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const TikhonovSolution s = solve_tikhonov_full(G, g, lambda_grid[i]);
        lc.residual_norm[i] = s.residual_norm;
        lc.solution_norm[i] = s.solution_norm;
    }
    if (n == 1) {
        lc.best_index = 0;
        return lc;
    }

    // Signed Menger curvature of the log-log curve; the L-corner (steep
    // branch turning into the flat branch as lambda grows) is a positive
    // extremum by this orientation.
    for (int i = 1; i + 1 < n; ++i) {
        const auto px = [&](int j) { return std::log(lc.residual_norm[j]); };
        const auto py = [&](int j) { return std::log(lc.solution_norm[j]); };
        if (!(lc.residual_norm[i - 1] > 0.0) || !(lc.residual_norm[i] > 0.0) ||
            !(lc.residual_norm[i + 1] > 0.0) || !(lc.solution_norm[i - 1] > 0.0) ||
            !(lc.solution_norm[i] > 0.0) || !(lc.solution_norm[i + 1] > 0.0))
            continue;
        const double ax = px(i) - px(i - 1), ay = py(i) - py(i - 1);
        const double bx = px(i + 1) - px(i), by = py(i + 1) - py(i);
        const double cx = px(i + 1) - px(i - 1), cy = py(i + 1) - py(i - 1);
        const double la = std::hypot(ax, ay), lb = std::hypot(bx, by), lcn = std::hypot(cx, cy);
        if (la == 0.0 || lb == 0.0 || lcn == 0.0) continue;
        lc.curvature[i] = 2.0 * (ax * by - ay * bx) / (la * lb * lcn);
    }
    int best = -1;
    double best_k = 0.0;
    for (int i = 1; i + 1 < n; ++i)
        if (std::isfinite(lc.curvature[i]) && lc.curvature[i] > best_k) {
            best_k = lc.curvature[i];
            best = i;
        }
    if (best < 0) {
        lc.degenerate = true;
        best = n / 2;  // median fallback
    }
    lc.best_index = best;
    return lc;
}

double error_metrics(const Eigen::VectorXd& field, const Eigen::VectorXd& truth,
                     const std::vector<Eigen::VectorXd>& axes) {
    if (field.size() != truth.size())
        throw std::invalid_argument("error_metrics: field/truth size mismatch");
    Eigen::Index prod = 1;
    for (const Eigen::VectorXd& ax : axes) prod *= ax.size();
    if (prod != field.size())
        throw std::invalid_argument("error_metrics: grid does not match the field shape");
    Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
    for (const Eigen::VectorXd& ax : axes) {
        const Eigen::VectorXd wa = trapezoid_weights(ax);
        Eigen::VectorXd nw(w.size() * wa.size());
        for (Eigen::Index i = 0; i < w.size(); ++i)
            for (Eigen::Index j = 0; j < wa.size(); ++j) nw[i * wa.size() + j] = w[i] * wa[j];
        w.swap(nw);
    }
    const double den = truth.cwiseAbs2().cwiseProduct(w).sum();
    if (den <= 0.0) throw std::domain_error("error_metrics: truth field vanishes on the grid");
    const double num = (field - truth).cwiseAbs2().cwiseProduct(w).sum();
    return std::sqrt(num / den);
}

Fields reconstruct_fields(const Eigen::VectorXd& x, const FieldRequest& req) {
    const int N = req.order;
    if (N < 1) throw std::domain_error("reconstruct_fields: order must be positive");
    if (req.mode != 1 && req.mode != 2)
        throw std::domain_error("reconstruct_fields: mode must be 1 or 2");
    const Eigen::Index want = (req.mode == 1) ? N : static_cast<Eigen::Index>(N) * N;
    if (x.size() != want)
        throw std::domain_error("reconstruct_fields: coefficient vector has length " +
                                std::to_string(x.size()) + ", expected " + std::to_string(want));

    Fields f;
    Eigen::VectorXd gamma_pat;  // gamma on the PAT spatial nodes
    if (req.mode == 1) {
        const BasisSpec dil2{N, 2.0, AxisRole::space};
        f.gamma = basis_matrix(dil2, req.gamma_x) * x;
        gamma_pat = basis_matrix(dil2, req.pat_x) * x;
    } else {
        const BasisSpec b{N, 1.0, AxisRole::space};
        const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                             Eigen::RowMajor>>
            Z(x.data(), N, N);
        const auto flatten_rowmajor = [](const Eigen::MatrixXd& m) {
            Eigen::VectorXd v(m.size());
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                v.segment(i * m.cols(), m.cols()) = m.row(i).transpose();
            return v;
        };
        f.gamma = flatten_rowmajor(basis_matrix(b, req.gamma_x) * Z *
                                   basis_matrix(b, req.gamma_y).transpose());
        gamma_pat = flatten_rowmajor(basis_matrix(b, req.pat_x) * Z *
                                     basis_matrix(b, req.pat_y).transpose());
    }
    if (req.clamp_negative) {
        f.gamma = f.gamma.cwiseMax(0.0);
        gamma_pat = gamma_pat.cwiseMax(0.0);
    }

    if (req.pat_noisy.size() != req.pat_omega.size() * gamma_pat.size())
        throw std::domain_error("reconstruct_fields: PAT samples do not match the grid");
    f.im_chi.resize(req.pat_noisy.size());
    const Eigen::Index ns = gamma_pat.size();
    for (Eigen::Index i = 0; i < req.pat_omega.size(); ++i)
        f.im_chi.segment(i * ns, ns) =
            req.pat_noisy.segment(i * ns, ns).cwiseProduct(gamma_pat);
    return f;
}

}  // namespace patoct
