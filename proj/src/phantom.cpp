#include "patoct/phantom.hpp"

#include <cmath>
#include <stdexcept>

#include "patoct/hermite.hpp"

namespace patoct {

namespace {

double h_fn(int k, double x) { return hermite_fn(k, x); }

Phantom make_ex1() {
    Phantom ph;
    ph.id = "ex1";
    ph.dim = 1;
    ph.gamma = [](double x, double) {
        const double x2 = x * x;
        return (2.0 * x2 * x2 + 1.0) * std::exp(-x2);
    };
    ph.im_psi = [](double w, double x, double) {
        const double x2 = x * x;
        return h_fn(1, w) * (x2 * x2 + x2 * x + x2 + 0.1) * std::exp(-2.0 * x2);
    };
    ph.omega_lo = -3.5;
    ph.omega_hi = 3.5;
    ph.support_lo = -4.0;
    ph.support_hi = 4.0;
    ph.w_lo = -4.0;
    ph.w_hi = 4.0;
    return ph;
}

Phantom make_ex2() {
    Phantom ph = make_ex1();
    ph.id = "ex2";
    ph.gamma = [](double x, double) {
        return h_fn(0, x) + h_fn(0, 2.0 * x) + h_fn(1, 3.0 * x);
    };
    return ph;
}

Phantom make_ex3() {
    Phantom ph = make_ex1();
    ph.id = "ex3";
    ph.im_psi = [](double w, double x, double) {
        const double x2 = x * x;
        return (h_fn(1, w) + h_fn(1, 2.0 * w)) * (x2 + 0.1) * std::exp(-2.0 * x2);
    };
    return ph;
}

Phantom make_ex4() {
    Phantom ph;
    ph.id = "ex4";
    ph.dim = 2;
    ph.gamma = [](double x, double y) {
        const double u = x + 1.5, v = y + 1.5;
        return std::exp(-u * u - v * v);
    };
    ph.im_psi = [](double w, double x, double y) {
        const double u = x + 1.6, v = y + 1.6;
        const double u2 = u * u, v2 = v * v;
        return 0.7 * (h_fn(1, w) + h_fn(1, 2.0 * w)) * std::exp(-u2 * u2 - 0.5 * v2 * v2);
    };
    ph.omega_lo = -4.0;
    ph.omega_hi = 4.0;
    ph.support_lo = -4.5;
    ph.support_hi = 4.5;
    ph.w_lo = -3.0;
    ph.w_hi = 3.0;
    return ph;
}

Phantom make_ex5() {
    Phantom ph;
    ph.id = "ex5";
    ph.dim = 2;
    ph.gamma = [](double x, double y) {
        const auto bump = [](double u, double v) { return std::exp(-u * u - v * v); };
        return bump(x + 0.5, y + 2.0) + 0.8 * bump(x + 2.0, y + 0.5) + bump(x - 2.0, y - 2.0);
    };
    ph.im_psi = [](double w, double x, double y) {
        const auto q = [](double u) {
            const double u2 = u * u;
            return u2 * u2;
        };
        const double b1 = std::exp(-q(x + 0.5) - q(y + 2.0));
        const double b2 = std::exp(-0.6 * q(x + 2.0) - q(y + 0.5));
        const double b3 = std::exp(-q(x - 2.0) - q(y - 2.0));
        return h_fn(1, w) * (b1 + b2 + 0.8 * b3);
    };
    ph.omega_lo = -4.0;
    ph.omega_hi = 4.0;
    ph.support_lo = -4.5;
    ph.support_hi = 4.5;
    ph.w_lo = -2.0;
    ph.w_hi = 2.0;
    return ph;
}

}  // namespace

Phantom phantom_by_id(const std::string& id) {
    if (id == "ex1") return make_ex1();
    if (id == "ex2") return make_ex2();
    if (id == "ex3") return make_ex3();
    if (id == "ex4") return make_ex4();
    if (id == "ex5") return make_ex5();
    throw std::domain_error("phantom_by_id: unknown phantom id '" + id + "'");
}

Eigen::VectorXd phantom_eval(const Phantom& ph, PhantomField which, const Eigen::MatrixXd& pts) {
    const int want = (which == PhantomField::gamma) ? ph.dim : ph.dim + 1;
    if (pts.cols() != want)
        throw std::invalid_argument("phantom_eval: expected " + std::to_string(want) +
                                    " coordinates per point, got " + std::to_string(pts.cols()));
    Eigen::VectorXd out(pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        if (which == PhantomField::gamma) {
            const double x = pts(i, 0);
            const double y = (ph.dim == 2) ? pts(i, 1) : 0.0;
            out[i] = ph.gamma(x, y);
        } else {
            const double w = pts(i, 0);
            const double x = pts(i, 1);
            const double y = (ph.dim == 2) ? pts(i, 2) : 0.0;
            out[i] = ph.im_psi(w, x, y);
        }
    }
    return out;
}

double support_leakage(const Phantom& ph, PhantomField which, double margin) {
    const double lo = (which == PhantomField::gamma ? ph.support_lo : ph.omega_lo) - margin;
    const double hi = (which == PhantomField::gamma ? ph.support_hi : ph.omega_hi) + margin;
    // Scan a band of width 2 beyond the enlarged box on every side.
    const int n_band = 81, n_along = 61, n_freq = 21;
    double worst = 0.0;
    const auto probe = [&](double x, double y) {
        if (which == PhantomField::gamma) {
            worst = std::max(worst, std::abs(ph.gamma(x, y)));
        } else {
            for (int iw = 0; iw < n_freq; ++iw) {
                const double w = ph.w_lo + (ph.w_hi - ph.w_lo) * iw / (n_freq - 1.0);
                worst = std::max(worst, std::abs(ph.im_psi(w, x, y)));
            }
        }
    };
    for (int ib = 0; ib < n_band; ++ib) {
        const double off = 2.0 * ib / (n_band - 1.0);
        if (ph.dim == 1) {
            probe(hi + off, 0.0);
            probe(lo - off, 0.0);
        } else {
            for (int ia = 0; ia < n_along; ++ia) {
                const double t = lo - 2.0 + (hi - lo + 4.0) * ia / (n_along - 1.0);
                probe(hi + off, t);
                probe(lo - off, t);
                probe(t, hi + off);
                probe(t, lo - off);
            }
        }
    }
    return worst;
}

}  // namespace patoct
