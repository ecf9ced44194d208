#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "patoct/galerkin1d.hpp"
#include "patoct/hermite.hpp"
#include "patoct/hilbert.hpp"
#include "patoct/quadrature.hpp"

using namespace patoct;
using cd = std::complex<double>;

namespace {

// Deterministic, non-symmetric PAT coefficient tensor p_{k,l} on an N x N
// basis (frequency axis dilation 1, depth axis dilation 2), plus its Hilbert
// partner computed through the coefficient map.
std::pair<HermiteExpansion, HermiteExpansion> synthetic_pat_pair(int n) {
    std::vector<BasisSpec> bases{{n, 1.0, AxisRole::frequency}, {n, 2.0, AxisRole::space}};
    HermiteExpansion p(bases);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) p.at(k, l) = std::sin(3.0 * k + 2.0 * l + 1.0) / (2.0 + k + l);
    Eigen::MatrixXd s = sign_overlap_matrix(n);
    HermiteExpansion pt = hilbert_coeffs(p, s);
    return {p, pt};
}

}  // namespace

TEST_CASE("assemble_A shape, zero input, determinism, and scaling") {
    auto [p, pt] = synthetic_pat_pair(15);
    Eigen::MatrixXcd a = assemble_A(p, pt, 15, -4.0, 4.0);
    CHECK(a.rows() == 43);  // 3N-2
    CHECK(a.cols() == 15);

    // Bitwise-identical on repeated assembly (fixed summation order).
    Eigen::MatrixXcd a2 = assemble_A(p, pt, 15, -4.0, 4.0);
    CHECK((a - a2).cwiseAbs().maxCoeff() == 0.0);

    // Exact homogeneity for a power-of-two scale.
    HermiteExpansion p2 = p, pt2 = pt;
    p2.coeffs() *= 2.0;
    pt2.coeffs() *= 2.0;
    Eigen::MatrixXcd ascaled = assemble_A(p2, pt2, 15, -4.0, 4.0);
    CHECK((ascaled - 2.0 * a).cwiseAbs().maxCoeff() == 0.0);

    // Zero coefficients give the zero system.
    HermiteExpansion z(p.bases()), zt(p.bases());
    z.coeffs().setZero(z.coeffs().size());
    zt.coeffs().setZero(zt.coeffs().size());
    CHECK(assemble_A(z, zt, 15, -4.0, 4.0).cwiseAbs().maxCoeff() == 0.0);

    // Degenerate windows are rejected.
    CHECK_THROWS_AS(assemble_A(p, pt, 15, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("assemble_A matches the brute-force double quadrature over W") {
    // The frequency rule spans exactly the assembly window W = [-4, 4]; the
    // spatial window is wide enough (dilation 2, degrees <= N-1) that the
    // y tail is negligible: |y| <= 6.
    QuadRule wrule = gauss_legendre(600, -4.0, 4.0);
    QuadRule yrule = gauss_legendre(600, -6.0, 6.0);

    for (int n : {3, 4}) {
        auto [p, pt] = synthetic_pat_pair(n);
        Eigen::MatrixXcd a = assemble_A(p, pt, n, -4.0, 4.0);
        Eigen::MatrixXcd ao = oracle_assemble_A(p, pt, n, wrule, yrule);
        double rel = (a - ao).norm() / ao.norm();
        CAPTURE(n);
        CHECK(rel < (n == 3 ? 1e-7 : 1e-6));
    }
}

TEST_CASE("windowed assembly converges to the whole-line reduction") {
    // 2 e^{w^2/4} h_s(w) K_j(w) decays like e^{-w^2} poly(w), so on
    // W = [-12, 12] the window restriction is invisible and the quadrature
    // form must reproduce the independent algebraic coefficient reduction.
    for (int n : {3, 8}) {
        auto [p, pt] = synthetic_pat_pair(n);
        Eigen::MatrixXcd aw = assemble_A(p, pt, n, -12.0, 12.0);
        Eigen::MatrixXcd af = assemble_A_fullline(p, pt, n);
        double rel = (aw - af).norm() / af.norm();
        CAPTURE(n);
        CHECK(rel < 1e-9);
    }
}

TEST_CASE("oracle row 0 agrees with a scalar reference summation") {
    // Independent plain-loop evaluation of the same tensor quadrature,
    // pinning the GEMM factorization of the oracle itself.
    const int n = 3;
    auto [p, pt] = synthetic_pat_pair(n);
    QuadRule wrule = gauss_legendre(200, -12.0, 12.0);
    QuadRule yrule = gauss_legendre(200, -6.0, 6.0);
    Eigen::MatrixXcd ao = oracle_assemble_A(p, pt, n, wrule, yrule);

    for (int j = 0; j < n; ++j) {
        cd acc(0.0, 0.0);
        for (int i = 0; i < wrule.size(); ++i) {
            double w = wrule.x[i];
            for (int q = 0; q < yrule.size(); ++q) {
                double y = yrule.x[q];
                cd chi(0.0, 0.0);
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        chi += cd(pt.at(k, l), p.at(k, l)) * hermite_fn(k, w) * hermite_fn(l, 2.0 * y);
                cd phase = std::exp(cd(0.0, -2.0 * w * y));
                acc += 2.0 * wrule.w[i] * yrule.w[q] * std::exp(0.25 * w * w) * hermite_fn(0, w) *
                       chi * phase * hermite_fn(j, 2.0 * y);
            }
        }
        CHECK(std::abs(acc - ao(0, j)) < 1e-10 * (1.0 + std::abs(acc)));
    }
}

TEST_CASE("assemble_rhs_m reproduces weighted-Hermite moments") {
    // m(w) = e^{-w^2/4} h_2(w) / 2 makes the integrand h_2 h_s, so the
    // moment vector is the unit vector e_2 by orthonormality.
    const int n = 6;
    Eigen::VectorXd grid = uniform_grid(1200, -12.0, 12.0);
    Eigen::VectorXcd m(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        m[i] = cd(0.5 * std::exp(-0.25 * grid[i] * grid[i]) * hermite_fn(2, grid[i]), 0.0);
    Eigen::VectorXcd rhs = assemble_rhs_m(grid, m, -12.0, 12.0, n);
    REQUIRE(rhs.size() == 3 * n - 2);
    for (Eigen::Index s = 0; s < rhs.size(); ++s) {
        double want = (s == 2) ? 1.0 : 0.0;
        CHECK(std::abs(rhs[s] - want) < 1e-8);
    }
}

TEST_CASE("assemble_rhs_m parity for a conjugate-symmetric trace") {
    // m(-w) = conj(m(w)) on a symmetric window forces real moments for even
    // s and imaginary moments for odd s.
    const int n = 5;
    Eigen::VectorXd grid = uniform_grid(800, -6.0, 6.0);
    Eigen::VectorXcd m(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        double w = grid[i];
        m[i] = std::exp(-0.5 * w * w) * cd(std::cos(w), std::sin(w));
    }
    Eigen::VectorXcd rhs = assemble_rhs_m(grid, m, -6.0, 6.0, n);
    for (Eigen::Index s = 0; s < rhs.size(); ++s) {
        if (s % 2 == 0)
            CHECK(std::abs(rhs[s].imag()) < 1e-8);
        else
            CHECK(std::abs(rhs[s].real()) < 1e-8);
    }

    // The zero trace maps to the zero moment vector.
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(grid.size());
    CHECK(assemble_rhs_m(grid, zero, -6.0, 6.0, n).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assemble_rhs_m rejects bad grids") {
    const int n = 6;  // needs >= 64 nodes
    Eigen::VectorXd coarse = uniform_grid(30, -4.0, 4.0);
    Eigen::VectorXcd mc = Eigen::VectorXcd::Zero(coarse.size());
    CHECK_THROWS_AS(assemble_rhs_m(coarse, mc, -4.0, 4.0, n), std::invalid_argument);

    Eigen::VectorXd outside = uniform_grid(200, -5.0, 5.0);
    Eigen::VectorXcd mo = Eigen::VectorXcd::Zero(outside.size());
    CHECK_THROWS_AS(assemble_rhs_m(outside, mo, -4.0, 4.0, n), std::invalid_argument);

    Eigen::VectorXd decreasing = uniform_grid(200, -4.0, 4.0).reverse();
    CHECK_THROWS_AS(assemble_rhs_m(decreasing, mo.head(200), -4.0, 4.0, n), std::invalid_argument);

    Eigen::VectorXd grid = uniform_grid(200, -4.0, 4.0);
    Eigen::VectorXcd wrong = Eigen::VectorXcd::Zero(199);
    CHECK_THROWS_AS(assemble_rhs_m(grid, wrong, -4.0, 4.0, n), std::invalid_argument);
}

TEST_CASE("planted depth profile satisfies the Galerkin system") {
    // Synthesize the trace from the analytic kernel columns at the moment
    // rule's own nodes; A gamma and the assembled moments then discretise
    // the same window integral on the same rule, so they agree to rounding.
    const int n = 6;
    const double wlo = -4.0, whi = 4.0;
    auto [p, pt] = synthetic_pat_pair(n);

    Eigen::VectorXcd gamma(n);
    for (int j = 0; j < n; ++j) gamma[j] = cd(std::cos(2.0 * j + 1.0) / (1.0 + j), 0.0);

    QuadRule rule = rhs_quadrature_rule_1d(wlo, whi);
    Eigen::MatrixXcd kcols = kernel_matrix_1d(p, pt, n, rule.x);
    Eigen::VectorXcd trace = kcols * gamma;

    Eigen::VectorXcd rhs = assemble_rhs_m(rule.x, trace, wlo, whi, n);
    Eigen::MatrixXcd a = assemble_A(p, pt, n, wlo, whi);
    double rel = (a * gamma - rhs).norm() / rhs.norm();
    CHECK(rel < 1e-10);
}
