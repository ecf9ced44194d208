#include "patoct/galerkin1d.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

#include "patoct/hilbert.hpp"
#include "patoct/spline.hpp"

#include "beta_table.hpp"

namespace patoct {

namespace {

using cd = std::complex<double>;

void check_pat_pair(const char* who, const HermiteExpansion& p, const HermiteExpansion& pt,
                    int n) {
    if (p.rank() != 2 || pt.rank() != 2)
        throw std::invalid_argument(std::string(who) + ": PAT coefficients must be rank-2");
    for (int a = 0; a < 2; ++a)
        if (p.bases()[a].n != pt.bases()[a].n ||
            p.bases()[a].dilation != pt.bases()[a].dilation)
            throw std::invalid_argument(std::string(who) +
                                        ": p and H[p] coefficient shapes differ");
    if (p.bases()[0].role != AxisRole::frequency || p.bases()[0].dilation != 1.0)
        throw std::invalid_argument(std::string(who) + ": axis 0 must be plain frequency");
    if (p.bases()[1].dilation != 2.0)
        throw std::invalid_argument(std::string(who) + ": depth axis must be h(2y) dilated");
    if (n < 1 || p.bases()[0].n < n || p.bases()[1].n < n)
        throw std::invalid_argument(std::string(who) + ": order exceeds the coefficient array");
}

}  // namespace

Eigen::MatrixXcd assemble_A(const HermiteExpansion& p, const HermiteExpansion& p_tilde, int N,
                            double w_lo, double w_hi) {
    check_pat_pair("assemble_A", p, p_tilde, N);
    if (!(w_lo < w_hi)) throw std::invalid_argument("assemble_A: empty frequency window");
    const int rows = 3 * N - 2;
    const QuadRule rule = rhs_quadrature_rule_1d(w_lo, w_hi);
    const Eigen::MatrixXcd k = kernel_matrix_1d(p, p_tilde, N, rule.x);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(rows, N);
    for (int i = 0; i < rule.size(); ++i) {
        const double w = rule.x[i];
        const Eigen::VectorXd h = hermite_fn_all(rows, w);
        a.noalias() +=
            (2.0 * std::exp(0.25 * w * w) * rule.w[i]) * (h.cast<cd>() * k.row(i));
    }
    return a;
}

Eigen::MatrixXcd assemble_A_fullline(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                                     int N) {
    check_pat_pair("assemble_A_fullline", p, p_tilde, N);
    const int rows = 3 * N - 2;
    const int dmax = 2 * (N - 1);

    detail::BetaTable bjl(N - 1, N - 1);     // beta_{j,l,n}
    detail::BetaTable bkq(N - 1, dmax);      // beta_{k,q,m}
    std::vector<CoeffList> pw(dmax + 1);
    for (int d = 0; d <= dmax; ++d) pw[d] = power_expand(d);

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(rows, N);
    for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l)
            for (int n = 0; n <= std::min(j, l); ++n) {
                const int dd = j + l - 2 * n;
                const cd c1 = bjl(j, l, n) * lemma1_zeta(dd);
                for (const CoeffTerm& t : pw[dd]) {
                    const int q = t.degree;
                    for (int k = 0; k < N; ++k) {
                        const cd coupling(p_tilde.at(k, l), p.at(k, l));
                        if (coupling == 0.0) continue;
                        const cd c2 = coupling * c1 * t.weight;
                        for (int m = 0; m <= std::min(k, q); ++m)
                            a(k + q - 2 * m, j) += c2 * bkq(k, q, m);
                    }
                }
            }
    return a;
}

QuadRule rhs_quadrature_rule_1d(double w_lo, double w_hi) {
    return composite_gauss_legendre(32, 32, w_lo, w_hi);
}

Eigen::VectorXcd assemble_rhs_m(const Eigen::VectorXd& omega, const Eigen::VectorXcd& m,
                                double w_lo, double w_hi, int N) {
    if (N < 1) throw std::invalid_argument("assemble_rhs_m: order must be positive");
    const int rows = 3 * N - 2;
    if (omega.size() != m.size())
        throw std::invalid_argument("assemble_rhs_m: trace and grid sizes differ");
    if (omega.size() < 4 * rows)
        throw std::invalid_argument("assemble_rhs_m: omega grid too coarse for the order");
    const double slack = 1e-9 * (w_hi - w_lo);
    if (omega[0] < w_lo - slack || omega[omega.size() - 1] > w_hi + slack)
        throw std::invalid_argument("assemble_rhs_m: omega grid not inside the window");
    for (Eigen::Index i = 1; i < omega.size(); ++i)
        if (!(omega[i] > omega[i - 1]))
            throw std::invalid_argument("assemble_rhs_m: omega grid must be increasing");

    CubicSpline re(omega, m.real()), im(omega, m.imag());
    QuadRule rule = rhs_quadrature_rule_1d(w_lo, w_hi);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rows);
    for (int i = 0; i < rule.size(); ++i) {
        const double w = rule.x[i];
        const cd f = 2.0 * std::exp(0.25 * w * w) * rule.w[i] * cd(re(w), im(w));
        const Eigen::VectorXd h = hermite_fn_all(rows, w);
        for (int s = 0; s < rows; ++s) out[s] += f * h[s];
    }
    return out;
}

Eigen::MatrixXcd kernel_matrix_1d(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                                  int N, const Eigen::VectorXd& omega) {
    check_pat_pair("kernel_matrix_1d", p, p_tilde, N);
    const int nw = static_cast<int>(omega.size());
    const int dmax = 2 * (N - 1);

    // E(i,k) = h_k(w_i); P(i,d) = e^{-w_i^2/4} w_i^d
    Eigen::MatrixXd e(nw, N), pd(nw, dmax + 1);
    for (int i = 0; i < nw; ++i) {
        e.row(i) = hermite_fn_all(N, omega[i]).transpose();
        double g = std::exp(-0.25 * omega[i] * omega[i]);
        for (int d = 0; d <= dmax; ++d) {
            pd(i, d) = g;
            g *= omega[i];
        }
    }

    detail::BetaTable bjl(N - 1, N - 1);
    Eigen::MatrixXcd out(nw, N);
    Eigen::MatrixXcd c(N, dmax + 1);  // C_j(k,d) = sum_{l,n} coupling/2 beta zeta
    for (int j = 0; j < N; ++j) {
        c.setZero();
        for (int l = 0; l < N; ++l)
            for (int n = 0; n <= std::min(j, l); ++n) {
                const int dd = j + l - 2 * n;
                const cd f = 0.5 * bjl(j, l, n) * lemma1_zeta(dd);
                for (int k = 0; k < N; ++k)
                    c(k, dd) += f * cd(p_tilde.at(k, l), p.at(k, l));
            }
        out.col(j) = ((e * c).array() * pd.array()).rowwise().sum();
    }
    return out;
}

Eigen::MatrixXcd oracle_assemble_A(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                                   int N, const QuadRule& omega_rule, const QuadRule& y_rule) {
    check_pat_pair("oracle_assemble_A", p, p_tilde, N);
    if (N > 6) throw std::invalid_argument("oracle_assemble_A: N exceeds the oracle cost cap");
    const int rows = 3 * N - 2;
    const int nw = omega_rule.size();
    const int ny = y_rule.size();

    // chi(w,y) = sum_{k,l} (pt+ip)_{k,l} h_k(w) h_l(2y)  as  Hw C Hy^T
    Eigen::MatrixXd hw(nw, N), hy(ny, N);
    for (int i = 0; i < nw; ++i) hw.row(i) = hermite_fn_all(N, omega_rule.x[i]).transpose();
    for (int q = 0; q < ny; ++q) hy.row(q) = hermite_fn_all(N, 2.0 * y_rule.x[q]).transpose();
    Eigen::MatrixXcd c(N, N);
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) c(k, l) = cd(p_tilde.at(k, l), p.at(k, l));
    Eigen::MatrixXcd chi = hw.cast<cd>() * c * hy.cast<cd>().transpose();

    // E(i,q) = chi(w_i, y_q) e^{-2 i w_i y_q}
    for (int i = 0; i < nw; ++i)
        for (int q = 0; q < ny; ++q)
            chi(i, q) *= std::exp(cd(0.0, -2.0 * omega_rule.x[i] * y_rule.x[q]));

    Eigen::MatrixXcd m1(rows, nw);
    for (int i = 0; i < nw; ++i) {
        const double w = omega_rule.x[i];
        m1.col(i) =
            (omega_rule.w[i] * std::exp(0.25 * w * w)) * hermite_fn_all(rows, w).cast<cd>();
    }
    Eigen::MatrixXcd m2(ny, N);
    for (int q = 0; q < ny; ++q) m2.row(q) = (y_rule.w[q] * hy.row(q)).cast<cd>();

    return 2.0 * m1 * chi * m2;
}

}  // namespace patoct
