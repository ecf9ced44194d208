#include "patoct/galerkin2d.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "beta_table.hpp"
#include "patoct/hilbert.hpp"
#include "patoct/spline.hpp"

namespace patoct {

namespace {

using cd = std::complex<double>;

void check_pat_triple(const char* who, const HermiteExpansion& p, const HermiteExpansion& pt,
                      int n) {
    if (p.rank() != 3 || pt.rank() != 3)
        throw std::invalid_argument(std::string(who) + ": PAT coefficients must be rank-3");
    for (int a = 0; a < 3; ++a)
        if (p.bases()[a].n != pt.bases()[a].n || p.bases()[a].dilation != pt.bases()[a].dilation)
            throw std::invalid_argument(std::string(who) +
                                        ": p and H[p] coefficient shapes differ");
    if (p.bases()[0].role != AxisRole::frequency || p.bases()[0].dilation != 1.0)
        throw std::invalid_argument(std::string(who) + ": axis 0 must be plain frequency");
    if (p.bases()[1].dilation != 1.0 || p.bases()[2].dilation != 1.0)
        throw std::invalid_argument(std::string(who) + ": spatial axes must be undilated");
    if (n < 1 || p.bases()[0].n < n || p.bases()[1].n < n || p.bases()[2].n < n)
        throw std::invalid_argument(std::string(who) + ": order exceeds the coefficient array");
}

// powers[d] = x^d built multiplicatively so that 0^0 = 1 exactly.
std::vector<double> power_table(double x, int dmax) {
    std::vector<double> p(dmax + 1);
    p[0] = 1.0;
    for (int d = 1; d <= dmax; ++d) p[d] = p[d - 1] * x;
    return p;
}

}  // namespace

void validate_direction(const DetectionDirection& theta) {
    if (!(theta.theta3 > 0.0))
        throw std::domain_error("DetectionDirection: theta3 must be positive");
    const double norm = std::sqrt(theta.theta2 * theta.theta2 + theta.theta3 * theta.theta3);
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::domain_error("DetectionDirection: (0, theta2, theta3) must be unit length");
}

Tensor3C assemble_B_raw(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                        double theta2, double tilde3, int N) {
    check_pat_triple("assemble_B", p, p_tilde, N);
    const int rows = 5 * N - 4;
    const int dmax = 2 * (N - 1);  // max k+n-2r and l+u-2q
    const int smax = 2 * dmax;     // max s

    detail::BetaTable bkn(N - 1, N - 1);   // beta_{k,n,r} and beta_{l,u,q}
    detail::BetaTable bad(N - 1, smax);    // beta_{a, s-2j, t}
    std::vector<CoeffList> pw(smax + 1);
    for (int s = 0; s <= smax; ++s) pw[s] = power_expand(s);
    std::vector<cd> zeta(dmax + 1);
    for (int d = 0; d <= dmax; ++d) zeta[d] = lemma1_zeta(d);
    const std::vector<double> t2p = power_table(theta2, dmax);
    const std::vector<double> t3p = power_table(tilde3, dmax);

    Tensor3C b(N, N, rows);
    for (int a = 0; a < N; ++a)
        for (int nn = 0; nn < N; ++nn)
            for (int u = 0; u < N; ++u) {
                const cd cp(p_tilde.at(a, nn, u), p.at(a, nn, u));
                if (cp == 0.0) continue;
                for (int k = 0; k < N; ++k)
                    for (int r = 0; r <= std::min(k, nn); ++r) {
                        const int d2 = k + nn - 2 * r;
                        const cd c2 = cp * (bkn(k, nn, r) * t2p[d2]) * zeta[d2];
                        for (int l = 0; l < N; ++l)
                            for (int q = 0; q <= std::min(l, u); ++q) {
                                const int d3 = l + u - 2 * q;
                                const cd c3 = c2 * (bkn(l, u, q) * t3p[d3]) * zeta[d3];
                                for (const CoeffTerm& t : pw[d2 + d3]) {
                                    const cd c4 = c3 * t.weight;
                                    for (int tt = 0; tt <= std::min(a, t.degree); ++tt)
                                        b.at(k, l, a + t.degree - 2 * tt) +=
                                            c4 * bad(a, t.degree, tt);
                                }
                            }
                    }
            }
    return b;
}

Tensor3C assemble_B(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                    const DetectionDirection& theta, int N, double w_lo, double w_hi) {
    validate_direction(theta);
    check_pat_triple("assemble_B", p, p_tilde, N);
    if (!(w_lo < w_hi)) throw std::invalid_argument("assemble_B: empty frequency window");
    const int rows = 5 * N - 4;
    const double t3 = theta.tilde3();
    const QuadRule rule = rhs_quadrature_rule_2d(w_lo, w_hi);
    const Eigen::MatrixXcd k = kernel_matrix_2d(p, p_tilde, N, theta, rule.x);
    Tensor3C b(N, N, rows);
    for (int i = 0; i < rule.size(); ++i) {
        const double w = rule.x[i];
        const Eigen::VectorXd h = hermite_fn_all(rows, w);
        const double wt = std::exp(0.5 * t3 * w * w) * rule.w[i];
        for (int kk = 0; kk < N; ++kk)
            for (int l = 0; l < N; ++l) {
                const cd v = wt * k(i, kk * N + l);
                for (int mu = 0; mu < rows; ++mu) b.at(kk, l, mu) += v * h[mu];
            }
    }
    return b;
}

QuadRule rhs_quadrature_rule_2d(double w_lo, double w_hi) {
    return composite_gauss_legendre(32, 64, w_lo, w_hi);
}

Eigen::VectorXcd assemble_rhs_theta(const Eigen::VectorXd& omega, const Eigen::VectorXcd& m,
                                    const DetectionDirection& theta, double w_lo, double w_hi,
                                    int N) {
    validate_direction(theta);
    if (N < 1) throw std::invalid_argument("assemble_rhs_theta: order must be positive");
    const int rows = 5 * N - 4;
    if (omega.size() != m.size())
        throw std::invalid_argument("assemble_rhs_theta: trace and grid sizes differ");
    if (omega.size() < 4 * rows)
        throw std::invalid_argument("assemble_rhs_theta: omega grid too coarse for the order");
    const double slack = 1e-9 * (w_hi - w_lo);
    if (omega[0] < w_lo - slack || omega[omega.size() - 1] > w_hi + slack)
        throw std::invalid_argument("assemble_rhs_theta: omega grid not inside the window");
    for (Eigen::Index i = 1; i < omega.size(); ++i)
        if (!(omega[i] > omega[i - 1]))
            throw std::invalid_argument("assemble_rhs_theta: omega grid must be increasing");

    const double t3 = theta.tilde3();
    CubicSpline re(omega, m.real()), im(omega, m.imag());
    QuadRule rule = rhs_quadrature_rule_2d(w_lo, w_hi);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rows);
    for (int i = 0; i < rule.size(); ++i) {
        const double w = rule.x[i];
        const cd f = std::exp(0.5 * t3 * w * w) * rule.w[i] * cd(re(w), im(w));
        const Eigen::VectorXd h = hermite_fn_all(rows, w);
        for (int mu = 0; mu < rows; ++mu) out[mu] += f * h[mu];
    }
    return out;
}

Eigen::MatrixXcd flatten_C(const Tensor3C& b) {
    Eigen::MatrixXcd c(b.n3, b.n1 * b.n2);
    for (int k = 0; k < b.n1; ++k)
        for (int l = 0; l < b.n2; ++l)
            for (int mu = 0; mu < b.n3; ++mu) c(mu, k * b.n2 + l) = b.at(k, l, mu);
    return c;
}

System2D stack_D(const std::vector<Tensor3C>& b_list,
                 const std::vector<Eigen::VectorXcd>& m_list,
                 const std::vector<DetectionDirection>& directions) {
    const int kdirs = static_cast<int>(b_list.size());
    if (kdirs < 1) throw std::domain_error("stack_D: need at least one direction");
    if (m_list.size() != b_list.size() || directions.size() != b_list.size())
        throw std::domain_error("stack_D: per-direction list lengths differ");
    const int n = b_list[0].n1;
    const int rows = 5 * n - 4;
    for (int i = 0; i < kdirs; ++i) {
        if (b_list[i].n1 != n || b_list[i].n2 != n || b_list[i].n3 != rows)
            throw std::domain_error("stack_D: inconsistent order across blocks");
        if (m_list[i].size() != rows)
            throw std::domain_error("stack_D: moment vector length mismatch");
        validate_direction(directions[i]);
    }
    System2D sys;
    sys.order = n;
    sys.directions = directions;
    sys.D.resize(kdirs * rows, n * n);
    sys.d.resize(kdirs * rows);
    for (int i = 0; i < kdirs; ++i) {
        sys.D.middleRows(i * rows, rows) = flatten_C(b_list[i]);
        sys.d.segment(i * rows, rows) = m_list[i];
    }
    return sys;
}

Eigen::MatrixXcd kernel_matrix_2d(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                                  int N, const DetectionDirection& theta,
                                  const Eigen::VectorXd& omega) {
    validate_direction(theta);
    check_pat_triple("kernel_matrix_2d", p, p_tilde, N);
    const int dmax = 2 * (N - 1);
    const double th2 = theta.theta2, t3 = theta.tilde3();

    detail::BetaTable bkn(N - 1, N - 1);
    std::vector<cd> zeta(dmax + 1);
    for (int d = 0; d <= dmax; ++d) zeta[d] = lemma1_zeta(d);

    Eigen::MatrixXcd out(omega.size(), N * N);
    Eigen::MatrixXcd t(N, N), g2(N, N), g3(N, N);
    for (Eigen::Index i = 0; i < omega.size(); ++i) {
        const double w = omega[i];
        const Eigen::VectorXd ha = hermite_fn_all(N, w);
        // Lemma-1 profiles for the two spatial axes.
        const double e2 = std::exp(-0.25 * (w * th2) * (w * th2));
        const double e3 = std::exp(-0.25 * (w * t3) * (w * t3));
        const std::vector<double> p2 = power_table(w * th2, dmax);
        const std::vector<double> p3 = power_table(w * t3, dmax);

        // t(n,u) = sum_a (pt+ip)_{a,n,u} h_a(w)
        t.setZero();
        for (int a = 0; a < N; ++a)
            for (int n = 0; n < N; ++n)
                for (int u = 0; u < N; ++u) t(n, u) += cd(p_tilde.at(a, n, u), p.at(a, n, u)) * ha[a];
        // g2(n,k) = sum_r beta_{k,n,r} zeta_{d2} e^{-(w th2)^2/4} (w th2)^{d2}
        g2.setZero();
        g3.setZero();
        for (int k = 0; k < N; ++k)
            for (int n = 0; n < N; ++n)
                for (int r = 0; r <= std::min(k, n); ++r) {
                    const int d = k + n - 2 * r;
                    g2(n, k) += bkn(k, n, r) * zeta[d] * (e2 * p2[d]);
                    g3(n, k) += bkn(k, n, r) * zeta[d] * (e3 * p3[d]);
                }
        const Eigen::MatrixXcd kk = g2.transpose() * t * g3;  // (k,l)
        for (int k = 0; k < N; ++k)
            for (int l = 0; l < N; ++l) out(i, k * N + l) = kk(k, l);
    }
    return out;
}

Tensor3C oracle_assemble_B(const HermiteExpansion& p, const HermiteExpansion& p_tilde,
                           const DetectionDirection& theta, int N, const QuadRule& omega_rule,
                           const QuadRule& y2_rule, const QuadRule& y3_rule) {
    validate_direction(theta);
    check_pat_triple("oracle_assemble_B", p, p_tilde, N);
    if (N > 4) throw std::invalid_argument("oracle_assemble_B: N capped at 4 (cost)");
    const int rows = 5 * N - 4;
    const double th2 = theta.theta2, t3 = theta.tilde3();

    // Basis samples over the spatial rules.
    Eigen::MatrixXd e2(y2_rule.size(), N), e3(y3_rule.size(), N);
    for (int q = 0; q < y2_rule.size(); ++q) e2.row(q) = hermite_fn_all(N, y2_rule.x[q]).transpose();
    for (int q = 0; q < y3_rule.size(); ++q) e3.row(q) = hermite_fn_all(N, y3_rule.x[q]).transpose();

    Tensor3C b(N, N, rows);
    Eigen::MatrixXcd c(N, N);
    Eigen::MatrixXcd a2(y2_rule.size(), N), a3(y3_rule.size(), N);
    for (int i = 0; i < omega_rule.size(); ++i) {
        const double w = omega_rule.x[i];
        const Eigen::VectorXd hall = hermite_fn_all(rows, w);
        // c(n,u) = sum_a (pt+ip)_{a,n,u} h_a(w): the kernel's own frequency
        // decay, kept inside the spatial quadratures so the e^{w^2 t3/2}
        // weight amplifies the signal, not the roundoff.
        c.setZero();
        for (int a = 0; a < N; ++a)
            for (int n = 0; n < N; ++n)
                for (int u = 0; u < N; ++u) c(n, u) += cd(p_tilde.at(a, n, u), p.at(a, n, u)) * hall[a];
        // a2(q,k) = w_q e^{-i w th2 y_q} h_k(y_q); m2 = e2^T a2 is the
        // numerical version of int h_n h_k e^{-i w th2 y} dy.
        for (int q = 0; q < y2_rule.size(); ++q)
            a2.row(q) = (y2_rule.w[q] * std::exp(cd(0.0, -w * th2 * y2_rule.x[q]))) *
                        e2.row(q).cast<cd>();
        for (int q = 0; q < y3_rule.size(); ++q)
            a3.row(q) = (y3_rule.w[q] * std::exp(cd(0.0, -w * t3 * y3_rule.x[q]))) *
                        e3.row(q).cast<cd>();
        const Eigen::MatrixXcd m2 = e2.transpose() * a2;  // (n,k)
        const Eigen::MatrixXcd m3 = e3.transpose() * a3;  // (u,l)
        const Eigen::MatrixXcd g = m2.transpose() * c * m3;  // (k,l)
        const double wt = omega_rule.w[i] * std::exp(0.5 * t3 * w * w);
        for (int k = 0; k < N; ++k)
            for (int l = 0; l < N; ++l)
                for (int mu = 0; mu < rows; ++mu) b.at(k, l, mu) += (wt * hall[mu]) * g(k, l);
    }
    return b;
}

}  // namespace patoct
