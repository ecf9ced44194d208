#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "patoct/hermite.hpp"
#include "patoct/quadrature.hpp"

using namespace patoct;

namespace {

Eigen::VectorXd test_grid(int n, double a, double b) { return uniform_grid(n, a, b); }

}  // namespace

TEST_CASE("low-order Hermite polynomials match closed forms") {
    CHECK(hermite_h(0, 1.7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hermite_h(3, 1.0) == doctest::Approx(-4.0).epsilon(1e-14));  // 8x^3 - 12x at x=1
    Eigen::VectorXd xs = test_grid(41, -3.0, 3.0);
    for (double x : xs) {
        CHECK(hermite_h(1, x) == doctest::Approx(2 * x).epsilon(1e-14));
        CHECK(hermite_h(2, x) == doctest::Approx(4 * x * x - 2).epsilon(1e-13));
        CHECK(hermite_h(4, x) ==
              doctest::Approx(16 * std::pow(x, 4) - 48 * x * x + 12).epsilon(1e-12));
    }
}

TEST_CASE("normalization constants") {
    const double pi_m14 = std::pow(M_PI, -0.25);
    CHECK(hermite_alpha(0) == doctest::Approx(pi_m14).epsilon(1e-15));
    CHECK(hermite_alpha(1) == doctest::Approx(1.0 / std::sqrt(2.0 * std::sqrt(M_PI))).epsilon(1e-15));
    // against the direct product formula
    double fact = 1.0, pow2 = 1.0;
    for (int k = 0; k <= 20; ++k) {
        if (k > 0) {
            fact *= k;
            pow2 *= 2.0;
        }
        CHECK(hermite_alpha(k) ==
              doctest::Approx(1.0 / std::sqrt(pow2 * fact * std::sqrt(M_PI))).epsilon(1e-13));
    }
    CHECK(hermite_fn(0, 0.0) == doctest::Approx(pi_m14).epsilon(1e-15));
}

TEST_CASE("hermite_fn agrees with alpha_k H_k exp(-x^2/2)") {
    Eigen::VectorXd xs = test_grid(121, -6.0, 6.0);
    for (int k : {1, 5, 17, 30}) {
        for (double x : xs) {
            double ref = hermite_alpha(k) * hermite_h(k, x) * std::exp(-0.5 * x * x);
            CHECK(hermite_fn(k, x) == doctest::Approx(ref).epsilon(1e-11));
        }
    }
    Eigen::VectorXd all = hermite_fn_all(31, 1.234);
    for (int k = 0; k < 31; ++k) CHECK(all[k] == doctest::Approx(hermite_fn(k, 1.234)).epsilon(1e-14));
}

TEST_CASE("orthonormality on [-12,12] with 400-node Gauss-Legendre") {
    const int n = 20;
    QuadRule rule = gauss_legendre(400, -12.0, 12.0);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < rule.size(); ++i) {
        Eigen::VectorXd h = hermite_fn_all(n, rule.x[i]);
        gram.noalias() += rule.w[i] * h * h.transpose();
    }
    double err = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    CHECK(err < 1e-12);
}

TEST_CASE("Feldheim linearization holds pointwise on the 241-point grid") {
    Eigen::VectorXd xs = test_grid(241, -6.0, 6.0);
    CHECK(feldheim_beta(0, 0, 0) == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-15));
    for (int k = 0; k <= 10; ++k) {
        for (int l = 0; l <= 10; ++l) {
            CoeffList terms = product_expand(k, l);
            for (double x : xs) {
                double lhs = hermite_fn(k, x) * hermite_fn(l, x);
                double rhs = 0.0;
                for (const auto& t : terms) rhs += t.weight * hermite_fn(t.degree, x);
                rhs *= std::exp(-0.5 * x * x);
                CHECK(std::abs(lhs - rhs) < 1e-11);
            }
        }
    }
}

TEST_CASE("power expansion reproduces w^k") {
    Eigen::VectorXd xs = test_grid(241, -6.0, 6.0);
    for (int k = 0; k <= 12; ++k) {
        CoeffList terms = power_expand(k);
        for (double x : xs) {
            double lhs = std::pow(x, k) * std::exp(-0.5 * x * x);
            double rhs = 0.0;
            for (const auto& t : terms) rhs += t.weight * hermite_fn(t.degree, x);
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("shift expansion (addition formula)") {
    Eigen::VectorXd xs = test_grid(61, -3.0, 3.0);
    for (double y : {0.3, -0.7, 1.3}) {
        for (int k = 0; k <= 10; ++k) {
            CoeffList terms = shift_expand(k, y);
            for (double x : xs) {
                double lhs = hermite_h(k, x + y);
                double rhs = 0.0, mag = 1.0;  // cancellation-limited: scale by term sizes
                for (const auto& t : terms) {
                    double term = t.weight * hermite_h(t.degree, x);
                    rhs += term;
                    mag += std::abs(term);
                }
                CHECK(std::abs(lhs - rhs) < 1e-12 * mag);
            }
        }
    }
}

TEST_CASE("scale expansion (multiplication formula)") {
    Eigen::VectorXd xs = test_grid(61, -3.0, 3.0);
    for (double rho : {2.0, 0.5, -1.5}) {
        for (int k = 0; k <= 10; ++k) {
            CoeffList terms = scale_expand(k, rho);
            for (double x : xs) {
                double lhs = hermite_h(k, rho * x);
                double rhs = 0.0, mag = 1.0;
                for (const auto& t : terms) {
                    double term = t.weight * hermite_h(t.degree, x);
                    rhs += term;
                    mag += std::abs(term);
                }
                CHECK(std::abs(lhs - rhs) < 1e-12 * mag);
            }
        }
    }
}

TEST_CASE("degree and argument validation") {
    CHECK_THROWS_AS(hermite_h(-1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hermite_h(kMaxEvalDegree + 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hermite_fn(kMaxEvalDegree + 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(feldheim_beta(3, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(scale_expand(4, 0.0), std::invalid_argument);
}
