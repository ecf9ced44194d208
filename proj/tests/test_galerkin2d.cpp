#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "patoct/galerkin2d.hpp"
#include "patoct/hermite.hpp"
#include "patoct/hilbert.hpp"
#include "patoct/quadrature.hpp"

using namespace patoct;
using cd = std::complex<double>;

namespace {

// Deterministic rank-3 PAT coefficients (frequency x y2 x y3, dilation 1)
// and the Hilbert partner along axis 0.
std::pair<HermiteExpansion, HermiteExpansion> synthetic_pat_triple(int n) {
    std::vector<BasisSpec> bases{{n, 1.0, AxisRole::frequency},
                                 {n, 1.0, AxisRole::space},
                                 {n, 1.0, AxisRole::space}};
    HermiteExpansion p(bases);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                p.at(a, i, j) = std::sin(2.0 * a + 3.0 * i + 5.0 * j + 1.0) / (3.0 + a + i + j);
    HermiteExpansion pt = hilbert_coeffs(p, sign_overlap_matrix(n));
    return {p, pt};
}

DetectionDirection example5_direction() {
    return {std::cos(5.0 * M_PI / 12.0), std::sin(5.0 * M_PI / 12.0)};
}

double tensor_rel_err(const Tensor3C& a, const Tensor3C& b) {
    return (a.v - b.v).norm() / b.v.norm();
}

}  // namespace

TEST_CASE("detection direction invariants") {
    CHECK_NOTHROW(validate_direction({0.0, 1.0}));
    CHECK_NOTHROW(validate_direction(example5_direction()));
    CHECK_THROWS_AS(validate_direction({0.0, -1.0}), std::domain_error);
    CHECK_THROWS_AS(validate_direction({0.5, 0.5}), std::domain_error);
    CHECK_THROWS_AS(validate_direction({1.0, 0.0}), std::domain_error);

    // Weight identity behind the assembly: theta2^2 + tilde3^2 = 2 tilde3
    // for any unit in-plane direction.
    for (double phi : {0.1, 0.7, 1.2, 5.0 * M_PI / 12.0}) {
        DetectionDirection th{std::cos(phi), std::sin(phi)};
        const double t3 = th.tilde3();
        CHECK(std::abs(th.theta2 * th.theta2 + t3 * t3 - 2.0 * t3) < 1e-12);
    }
}

TEST_CASE("assemble_B shape, zero input, determinism, scaling") {
    auto [p, pt] = synthetic_pat_triple(5);
    DetectionDirection th{0.0, 1.0};
    Tensor3C b = assemble_B(p, pt, th, 5, -3.0, 3.0);
    CHECK(b.n1 == 5);
    CHECK(b.n2 == 5);
    CHECK(b.n3 == 21);  // 5N-4

    Tensor3C b2 = assemble_B(p, pt, th, 5, -3.0, 3.0);
    CHECK((b.v - b2.v).cwiseAbs().maxCoeff() == 0.0);

    HermiteExpansion ps = p, pts = pt;
    ps.coeffs() *= 2.0;
    pts.coeffs() *= 2.0;
    Tensor3C bs = assemble_B(ps, pts, th, 5, -3.0, 3.0);
    CHECK((bs.v - 2.0 * b.v).cwiseAbs().maxCoeff() == 0.0);

    HermiteExpansion z(p.bases()), zt(p.bases());
    z.coeffs().setZero(z.coeffs().size());
    zt.coeffs().setZero(zt.coeffs().size());
    CHECK(assemble_B(z, zt, th, 5, -3.0, 3.0).v.cwiseAbs().maxCoeff() == 0.0);

    // Degenerate windows are rejected.
    CHECK_THROWS_AS(assemble_B(p, pt, th, 5, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("assemble_B entries are low-degree polynomials in theta2 and tilde3") {
    // Entrywise degree <= 2(N-1) in each argument: a Lagrange interpolant
    // through 2N-1 samples must reproduce the tensor exactly.
    const int n = 4;
    const int npts = 2 * n - 1;
    auto [p, pt] = synthetic_pat_triple(n);

    auto lagrange_check = [&](bool vary_theta2) {
        std::vector<double> x(npts);
        for (int i = 0; i < npts; ++i) x[i] = std::cos(M_PI * (i + 0.5) / npts);  // Chebyshev
        std::vector<Tensor3C> samples;
        for (int i = 0; i < npts; ++i)
            samples.push_back(vary_theta2 ? assemble_B_raw(p, pt, x[i], 1.5, n)
                                          : assemble_B_raw(p, pt, 0.3, 1.5 + 0.25 * x[i], n));
        const double xq = 0.377;
        Tensor3C direct = vary_theta2 ? assemble_B_raw(p, pt, xq, 1.5, n)
                                      : assemble_B_raw(p, pt, 0.3, 1.5 + 0.25 * xq, n);
        Eigen::VectorXcd interp = Eigen::VectorXcd::Zero(direct.v.size());
        for (int i = 0; i < npts; ++i) {
            double li = 1.0;
            for (int j = 0; j < npts; ++j)
                if (j != i) li *= (xq - x[j]) / (x[i] - x[j]);
            interp += li * samples[i].v;
        }
        CHECK((interp - direct.v).norm() / direct.v.norm() < 1e-10);
    };
    lagrange_check(true);
    lagrange_check(false);
}

TEST_CASE("assemble_B matches the brute-force triple quadrature over W") {
    // The oracle frequency rule spans exactly the assembly window; the
    // spatial windows are wide enough that the y tails (unit dilation,
    // degrees <= N-1) stay below the e^{w^2 tilde3/2}-amplified 1e-8 level.
    QuadRule wrule = gauss_legendre(600, -3.0, 3.0);
    QuadRule yrule = gauss_legendre(400, -6.0, 6.0);

    const int n = 3;
    auto [p, pt] = synthetic_pat_triple(n);
    for (DetectionDirection th : {DetectionDirection{0.0, 1.0}, example5_direction()}) {
        Tensor3C b = assemble_B(p, pt, th, n, -3.0, 3.0);
        Tensor3C bo = oracle_assemble_B(p, pt, th, n, wrule, yrule, yrule);
        CAPTURE(th.theta2);
        CHECK(tensor_rel_err(b, bo) < 1e-5);
    }

    CHECK_THROWS_AS(oracle_assemble_B(p, pt, {0.0, 1.0}, 5, wrule, yrule, yrule),
                    std::invalid_argument);
}

TEST_CASE("windowed assembly converges to the whole-line reduction") {
    // On the sphere theta2^2 + tilde3^2 = 2 tilde3, so the moment weight
    // cancels the kernel Gaussian exactly and the integrand decays like
    // e^{-w^2/2} poly(w): at W = [-12, 12] the window restriction is
    // invisible and the quadrature form must reproduce the independent
    // algebraic coefficient reduction.
    const int n = 4;
    auto [p, pt] = synthetic_pat_triple(n);
    for (DetectionDirection th : {DetectionDirection{0.0, 1.0}, example5_direction()}) {
        Tensor3C bw = assemble_B(p, pt, th, n, -12.0, 12.0);
        Tensor3C bf = assemble_B_raw(p, pt, th.theta2, th.tilde3(), n);
        CAPTURE(th.theta2);
        CHECK(tensor_rel_err(bw, bf) < 1e-9);
    }
}

TEST_CASE("oracle entry (0,0,0) agrees with a scalar reference summation") {
    const int n = 2;
    auto [p, pt] = synthetic_pat_triple(n);
    DetectionDirection th = example5_direction();
    const double t3 = th.tilde3();
    QuadRule wrule = gauss_legendre(90, -6.0, 6.0);
    QuadRule yrule = gauss_legendre(80, -5.0, 5.0);
    Tensor3C bo = oracle_assemble_B(p, pt, th, n, wrule, yrule, yrule);

    cd acc(0.0, 0.0);
    for (int i = 0; i < wrule.size(); ++i) {
        const double w = wrule.x[i];
        for (int q = 0; q < yrule.size(); ++q) {
            const double y2 = yrule.x[q];
            for (int s = 0; s < yrule.size(); ++s) {
                const double y3 = yrule.x[s];
                cd chi(0.0, 0.0);
                for (int a = 0; a < n; ++a)
                    for (int u = 0; u < n; ++u)
                        for (int v = 0; v < n; ++v)
                            chi += cd(pt.at(a, u, v), p.at(a, u, v)) * hermite_fn(a, w) *
                                   hermite_fn(u, y2) * hermite_fn(v, y3);
                acc += wrule.w[i] * yrule.w[q] * yrule.w[s] * std::exp(0.5 * t3 * w * w) *
                       hermite_fn(0, w) * chi *
                       std::exp(cd(0.0, -w * (th.theta2 * y2 + t3 * y3))) * hermite_fn(0, y2) *
                       hermite_fn(0, y3);
            }
        }
    }
    CHECK(std::abs(acc - bo.at(0, 0, 0)) < 1e-10 * (1.0 + std::abs(acc)));
}

TEST_CASE("assemble_rhs_theta reproduces weighted-Hermite moments") {
    // m(w) = e^{-w^2 tilde3/2} h_4(w) makes the integrand h_4 h_mu, so the
    // moment vector is e_4 by orthonormality.
    const int n = 4;
    DetectionDirection th = example5_direction();
    const double t3 = th.tilde3();
    Eigen::VectorXd grid = uniform_grid(3000, -9.0, 9.0);
    Eigen::VectorXcd m(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        m[i] = cd(std::exp(-0.5 * t3 * grid[i] * grid[i]) * hermite_fn(4, grid[i]), 0.0);
    Eigen::VectorXcd rhs = assemble_rhs_theta(grid, m, th, -9.0, 9.0, n);
    REQUIRE(rhs.size() == 5 * n - 4);
    for (Eigen::Index mu = 0; mu < rhs.size(); ++mu) {
        double want = (mu == 4) ? 1.0 : 0.0;
        CHECK(std::abs(rhs[mu] - want) < 1e-8);
    }

    // Zero trace maps to zero and bad grids are rejected.
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(grid.size());
    CHECK(assemble_rhs_theta(grid, zero, th, -9.0, 9.0, n).cwiseAbs().maxCoeff() == 0.0);
    Eigen::VectorXd coarse = uniform_grid(30, -9.0, 9.0);
    CHECK_THROWS_AS(assemble_rhs_theta(coarse, zero.head(30), th, -9.0, 9.0, n),
                    std::invalid_argument);
    Eigen::VectorXd outside = uniform_grid(400, -10.0, 10.0);
    CHECK_THROWS_AS(assemble_rhs_theta(outside, zero.head(400), th, -9.0, 9.0, n),
                    std::invalid_argument);
}

TEST_CASE("stack_D layout and equivariance") {
    const int n = 5;
    auto [p, pt] = synthetic_pat_triple(n);
    std::vector<DetectionDirection> dirs{{0.0, 1.0}, example5_direction(),
                                         {-std::cos(5.0 * M_PI / 12.0), std::sin(5.0 * M_PI / 12.0)}};
    std::vector<Tensor3C> bs;
    std::vector<Eigen::VectorXcd> ms;
    for (int i = 0; i < 3; ++i) {
        bs.push_back(assemble_B(p, pt, dirs[i], n, -3.0, 3.0));
        Eigen::VectorXcd m(5 * n - 4);
        for (int mu = 0; mu < m.size(); ++mu) m[mu] = cd(mu + 1.0, 0.1 * i);
        ms.push_back(m);
    }
    System2D sys = stack_D(bs, ms, dirs);
    CHECK(sys.D.rows() == 63);  // K(5N-4)
    CHECK(sys.D.cols() == 25);  // N^2
    CHECK(sys.d.size() == 63);

    // K=1 reduces to the flattened block.
    System2D one = stack_D({bs[1]}, {ms[1]}, {dirs[1]});
    CHECK((one.D - flatten_C(bs[1])).cwiseAbs().maxCoeff() == 0.0);

    // Permuting the direction list permutes row blocks.
    System2D perm = stack_D({bs[2], bs[0], bs[1]}, {ms[2], ms[0], ms[1]},
                            {dirs[2], dirs[0], dirs[1]});
    const int rows = 5 * n - 4;
    CHECK((perm.D.middleRows(0, rows) - sys.D.middleRows(2 * rows, rows)).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((perm.D.middleRows(rows, rows) - sys.D.middleRows(0, rows)).cwiseAbs().maxCoeff() == 0.0);

    // Inconsistent orders are rejected.
    auto [p3, pt3] = synthetic_pat_triple(3);
    std::vector<Tensor3C> bad{bs[0], assemble_B(p3, pt3, dirs[1], 3, -3.0, 3.0)};
    CHECK_THROWS_AS(stack_D(bad, {ms[0], ms[1]}, {dirs[0], dirs[1]}), std::domain_error);
}

TEST_CASE("planted coefficient field satisfies the stacked system") {
    // Inverse-crime consistency: trace synthesized from the analytic kernel
    // columns at the moment rule's own nodes; D zeta and d then discretise
    // the same window integrals on the same rule and agree to rounding.
    const int n = 4;
    const double wlo = -2.0, whi = 2.0;
    auto [p, pt] = synthetic_pat_triple(n);
    std::vector<DetectionDirection> dirs{{0.0, 1.0}, example5_direction()};

    Eigen::VectorXcd zeta(n * n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            zeta[k * n + l] = cd(std::sin(1.0 + 2.0 * k + 3.0 * l) / (1.0 + k + l), 0.0);

    QuadRule rule = rhs_quadrature_rule_2d(wlo, whi);
    std::vector<Tensor3C> bs;
    std::vector<Eigen::VectorXcd> ms;
    for (const DetectionDirection& th : dirs) {
        bs.push_back(assemble_B(p, pt, th, n, wlo, whi));
        Eigen::MatrixXcd kcols = kernel_matrix_2d(p, pt, n, th, rule.x);
        Eigen::VectorXcd trace = kcols * zeta;
        ms.push_back(assemble_rhs_theta(rule.x, trace, th, wlo, whi, n));
    }
    System2D sys = stack_D(bs, ms, dirs);
    double rel = (sys.D * zeta - sys.d).norm() / sys.d.norm();
    CHECK(rel < 1e-9);
}
