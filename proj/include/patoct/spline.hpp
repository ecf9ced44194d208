#pragma once

#include <Eigen/Dense>

namespace patoct {

// Natural cubic spline through strictly increasing knots.  Evaluation at a
// knot reproduces the knot value bitwise (the local polynomial is anchored at
// the left knot), which quadrature paths rely on when data was sampled at the
// quadrature nodes themselves.  Points outside the knot range evaluate the
// first/last segment polynomial.
class CubicSpline {
public:
    CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

    double operator()(double t) const;

private:
    Eigen::VectorXd x_, y_, b_, c_, d_;  // s = y + b dt + c dt^2 + d dt^3
};

}  // namespace patoct
