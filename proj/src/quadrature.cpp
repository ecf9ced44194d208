#include "patoct/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace patoct {

namespace {

// Newton iteration on the roots of P_n; exploits root symmetry about 0.
QuadRule compute_gauss_legendre(int n) {
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;  // P_j(z), P_{j-1}(z)
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);  // P_n'(z)
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

}  // namespace

QuadRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    static std::map<int, QuadRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

QuadRule gauss_legendre(int n, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
    QuadRule ref = gauss_legendre(n);
    QuadRule r;
    const double c = 0.5 * (b - a), d = 0.5 * (b + a);
    r.x = (c * ref.x).array() + d;
    r.w = c * ref.w;
    return r;
}

QuadRule composite_gauss_legendre(int nodes_per_panel, int panels, double a, double b) {
    if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: need panels >= 1");
    QuadRule r;
    r.x.resize(nodes_per_panel * panels);
    r.w.resize(nodes_per_panel * panels);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        QuadRule panel = gauss_legendre(nodes_per_panel, a + p * width, a + (p + 1) * width);
        r.x.segment(p * nodes_per_panel, nodes_per_panel) = panel.x;
        r.w.segment(p * nodes_per_panel, nodes_per_panel) = panel.w;
    }
    return r;
}

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    if (n < 2) throw std::invalid_argument("trapezoid_weights: need >= 2 nodes");
    Eigen::VectorXd w(n);
    w[0] = 0.5 * (x[1] - x[0]);
    for (int i = 1; i + 1 < n; ++i) w[i] = 0.5 * (x[i + 1] - x[i - 1]);
    w[n - 1] = 0.5 * (x[n - 1] - x[n - 2]);
    return w;
}

Eigen::VectorXd uniform_grid(int n, double a, double b) {
    if (n < 2) throw std::invalid_argument("uniform_grid: need n >= 2");
    const double h = (b - a) / (n - 1);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = a + i * h;
    x[n - 1] = b;
    return x;
}

}  // namespace patoct
