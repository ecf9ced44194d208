#include "patoct/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace patoct {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLnPi = 1.1447298858494002;

void check_degree(int k, const char* who) {
    if (k < 0 || k > kMaxEvalDegree)
        throw std::invalid_argument(std::string(who) + ": degree " + std::to_string(k) +
                                    " outside [0," + std::to_string(kMaxEvalDegree) + "]");
}

double lg(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }  // log n!

}  // namespace

double hermite_h(int k, double x) {
    check_degree(k, "hermite_h");
    if (k == 0) return 1.0;
    double hm = 1.0, h = 2.0 * x;
    for (int j = 1; j < k; ++j) {
        double next = 2.0 * x * h - 2.0 * j * hm;
        hm = h;
        h = next;
    }
    return h;
}

double hermite_alpha(int k) {
    check_degree(k, "hermite_alpha");
    return std::exp(-0.5 * (k * kLn2 + lg(k) + 0.5 * kLnPi));
}

double hermite_fn(int k, double x) {
    check_degree(k, "hermite_fn");
    double hm = 0.0;
    double h = std::exp(-0.5 * x * x - 0.25 * kLnPi);  // h_0
    for (int j = 0; j < k; ++j) {
        double next = x * std::sqrt(2.0 / (j + 1)) * h - std::sqrt(static_cast<double>(j) / (j + 1)) * hm;
        hm = h;
        h = next;
    }
    return h;
}

Eigen::VectorXd hermite_fn_all(int n, double x) {
    check_degree(n - 1, "hermite_fn_all");
    Eigen::VectorXd v(n);
    double hm = 0.0;
    double h = std::exp(-0.5 * x * x - 0.25 * kLnPi);
    for (int j = 0; j < n; ++j) {
        v[j] = h;
        double next = x * std::sqrt(2.0 / (j + 1)) * h - std::sqrt(static_cast<double>(j) / (j + 1)) * hm;
        hm = h;
        h = next;
    }
    return v;
}

double feldheim_beta(int k, int l, int m) {
    check_degree(k, "feldheim_beta");
    check_degree(l, "feldheim_beta");
    if (m < 0 || m > std::min(k, l))
        throw std::invalid_argument("feldheim_beta: need 0 <= m <= min(k,l)");
    return std::exp(-0.25 * kLnPi + 0.5 * (lg(k) + lg(l) + lg(k + l - 2 * m)) - lg(m) -
                    lg(k - m) - lg(l - m));
}

CoeffList product_expand(int k, int l) {
    CoeffList out;
    out.reserve(std::min(k, l) + 1);
    for (int m = 0; m <= std::min(k, l); ++m)
        out.push_back({k + l - 2 * m, feldheim_beta(k, l, m)});
    return out;
}

CoeffList power_expand(int k) {
    check_degree(k, "power_expand");
    CoeffList out;
    out.reserve(k / 2 + 1);
    for (int q = 0; q <= k / 2; ++q) {
        int d = k - 2 * q;
        // (k!/2^k) / (q! d! alpha_d); the 1/alpha_d folded in as exp(+log).
        double w = std::exp(lg(k) - k * kLn2 - lg(q) - 0.5 * lg(d) + 0.5 * d * kLn2 + 0.25 * kLnPi);
        out.push_back({d, w});
    }
    return out;
}

CoeffList shift_expand(int k, double y) {
    check_degree(k, "shift_expand");
    CoeffList out;
    out.reserve(k + 1);
    for (int m = 0; m <= k; ++m) {
        double w = std::exp(lg(k) - lg(m) - lg(k - m)) * std::pow(2.0 * y, k - m);
        out.push_back({m, w});
    }
    return out;
}

CoeffList scale_expand(int k, double rho) {
    check_degree(k, "scale_expand");
    if (rho == 0.0) throw std::invalid_argument("scale_expand: rho must be nonzero");
    CoeffList out;
    out.reserve(k / 2 + 1);
    for (int i = 0; i <= k / 2; ++i) {
        int d = k - 2 * i;
        double w = std::exp(lg(k) - lg(i) - lg(d)) * std::pow(rho, d) * std::pow(rho * rho - 1.0, i);
        out.push_back({d, w});
    }
    return out;
}

}  // namespace patoct
