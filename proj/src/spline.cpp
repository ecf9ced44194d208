#include "patoct/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace patoct {

CubicSpline::CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y) : x_(x), y_(y) {
    const Eigen::Index n = x.size();
    if (n != y.size()) throw std::invalid_argument("CubicSpline: knot and value counts differ");
    if (n < 4) throw std::invalid_argument("CubicSpline: need at least four knots");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("CubicSpline: knots must be strictly increasing");

    // Second derivatives M by the Thomas algorithm; natural ends M_0 = M_{n-1} = 0.
    Eigen::VectorXd h = x.tail(n - 1) - x.head(n - 1);
    Eigen::VectorXd diag(n - 2), rhs(n - 2), upper(n - 2);
    for (Eigen::Index i = 0; i < n - 2; ++i) {
        diag[i] = (h[i] + h[i + 1]) / 3.0;
        upper[i] = h[i + 1] / 6.0;
        rhs[i] = (y[i + 2] - y[i + 1]) / h[i + 1] - (y[i + 1] - y[i]) / h[i];
    }
    for (Eigen::Index i = 1; i < n - 2; ++i) {
        double f = upper[i - 1] / diag[i - 1];  // lower band equals the upper band
        diag[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = n - 3; i >= 0; --i)
        m[i + 1] = (rhs[i] - (i + 1 < n - 2 ? upper[i] * m[i + 2] : 0.0)) / diag[i];

    b_.resize(n - 1);
    c_.resize(n - 1);
    d_.resize(n - 1);
    for (Eigen::Index i = 0; i < n - 1; ++i) {
        b_[i] = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
        c_[i] = m[i] / 2.0;
        d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
    }
}

double CubicSpline::operator()(double t) const {
    const double* beg = x_.data();
    const double* end = beg + x_.size();
    Eigen::Index i = std::upper_bound(beg, end, t) - beg - 1;
    i = std::clamp<Eigen::Index>(i, 0, x_.size() - 2);
    double dt = t - x_[i];
    return y_[i] + dt * (b_[i] + dt * (c_[i] + dt * d_[i]));
}

}  // namespace patoct
