#include "patoct/hilbert.hpp"

#include <cmath>
#include <stdexcept>

namespace patoct {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// (-i)^k
std::complex<double> minus_i_pow(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

}  // namespace

Eigen::MatrixXd sign_overlap_matrix(int n) {
    if (n < 1 || n > kMaxBasisSize + 1)
        throw std::invalid_argument("sign_overlap_matrix: order out of range");
    QuadRule rule = gauss_legendre(200, 0.0, 12.0);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < rule.size(); ++i) {
        Eigen::VectorXd h = hermite_fn_all(n, rule.x[i]);
        s.noalias() += (2.0 * rule.w[i]) * h * h.transpose();
    }
    // sign(x) kills the even-parity products.
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
            if (((k + m) & 1) == 0) s(k, m) = 0.0;
    return s;
}

Eigen::MatrixXd hilbert_coeff_matrix(const Eigen::MatrixXd& s) {
    // T_{k,m} = Re[(-i)^{k-m+1}] S_{k,m}: antisymmetric, as a skew-adjoint
    // operator's matrix must be.
    Eigen::MatrixXd t = s;
    for (Eigen::Index k = 0; k < s.rows(); ++k)
        for (Eigen::Index m = 0; m < s.cols(); ++m) {
            int r = ((static_cast<int>(k - m) % 4) + 4) % 4;
            t(k, m) *= (r == 1) ? -1.0 : (r == 3 ? 1.0 : 0.0);
        }
    return t;
}

HermiteExpansion hilbert_coeffs(const HermiteExpansion& f, const Eigen::MatrixXd& s) {
    const int n0 = f.bases()[0].n;
    if (s.rows() < n0 || s.cols() < n0)
        throw std::invalid_argument("hilbert_coeffs: sign-overlap matrix smaller than axis 0");
    // Guard against being handed the processed (antisymmetric) coefficient map
    // instead of the raw symmetric overlap matrix: the sign pattern would then
    // be applied twice, which silently destroys the transform.
    if ((s.topLeftCorner(n0, n0) - s.topLeftCorner(n0, n0).transpose()).cwiseAbs().maxCoeff() >
        1e-12)
        throw std::invalid_argument(
            "hilbert_coeffs: expected the raw (symmetric) sign-overlap matrix");
    if (f.rank() > 1 && f.bases()[0].role != AxisRole::frequency)
        throw std::invalid_argument("hilbert_coeffs: axis 0 must be the frequency axis");
    Eigen::MatrixXd t = hilbert_coeff_matrix(s.topLeftCorner(n0, n0));
    HermiteExpansion out(f.bases());
    const Eigen::Index rest = f.size() / n0;
    Eigen::Map<const RowMajorMatrix> in(f.coeffs().data(), n0, rest);
    RowMajorMatrix res = t * in;
    out.coeffs() = Eigen::Map<const Eigen::VectorXd>(res.data(), res.size());
    return out;
}

std::complex<double> lemma1_zeta(int k) {
    return std::sqrt(M_PI) * hermite_alpha(k) * minus_i_pow(k);
}

std::complex<double> lemma1_kernel(int k, double w) {
    return lemma1_zeta(k) * std::exp(-0.25 * w * w) * std::pow(w, k);
}

Eigen::VectorXd pv_extend_grid(const Eigen::VectorXd& data, int ratio, double extension,
                               int* offset) {
    const int nd = static_cast<int>(data.size());
    if (nd < 2) throw std::invalid_argument("pv_extend_grid: need >= 2 data nodes");
    if (ratio < 2 || (ratio & (ratio - 1)) != 0)
        throw std::invalid_argument("pv_extend_grid: ratio must be a power of two >= 2");
    const double hd = (data[nd - 1] - data[0]) / (nd - 1);
    const double hf = hd / ratio;
    // Margin of exactly one data cell beyond the requested extension keeps
    // the integration window independent of the refinement ratio (and covers
    // the interior-node stencil of pv_hilbert_matrix, since ratio >= 2).
    const int next = static_cast<int>(std::ceil(extension / hf)) + ratio;
    const int nf = (nd - 1) * ratio + 2 * next + 1;
    Eigen::VectorXd fine(nf);
    for (int j = 0; j < nf; ++j) fine[j] = data[0] + (j - next) * hf;
    if (offset) *offset = next;
    return fine;
}

Eigen::MatrixXd pv_hilbert_matrix(const Eigen::VectorXd& fine, const Eigen::VectorXd& out) {
    const int n = static_cast<int>(fine.size());
    if (n < 8) throw std::invalid_argument("pv_hilbert_matrix: fine grid too small");
    const double h = fine[1] - fine[0];
    for (int j = 1; j < n; ++j)
        if (std::abs(fine[j] - fine[j - 1] - h) > 1e-9 * h)
            throw std::invalid_argument("pv_hilbert_matrix: fine grid must be uniform");
    const double a = fine[0], b = fine[n - 1];

    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(out.size(), n);
    for (Eigen::Index r = 0; r < out.size(); ++r) {
        const double w = out[r];
        const int i0 = static_cast<int>(std::lround((w - a) / h));
        if (i0 < 2 || i0 > n - 3 || std::abs(fine[i0] - w) > 0.125 * h)
            throw std::invalid_argument("pv_hilbert_matrix: output node not an interior fine node");
        auto row = mat.row(r);
        // Punctured trapezoid of g(t) = (f(t) - f(w)) / (t - w).
        for (int j = 0; j < n; ++j) {
            if (j == i0) continue;
            const double tw = (j == 0 || j == n - 1) ? 0.5 * h : h;
            const double inv = 1.0 / (fine[j] - w);
            row[j] += tw * inv;
            row[i0] -= tw * inv;
        }
        // Restore the singular-node trapezoid term h * g(w) = h * f'(w).
        row[i0 + 2] += -1.0 / 12.0;
        row[i0 + 1] += 8.0 / 12.0;
        row[i0 - 1] += -8.0 / 12.0;
        row[i0 - 2] += 1.0 / 12.0;
        // Analytic PV of the subtracted pole.
        row[i0] += std::log((b - w) / (w - a));
        // Euler-Maclaurin end correction  h^2/12 (g'(a) - g'(b)),
        // with one-sided difference quotients for g'.
        const double ia0 = 1.0 / (fine[0] - w), ia1 = 1.0 / (fine[1] - w);
        const double ib0 = 1.0 / (fine[n - 1] - w), ib1 = 1.0 / (fine[n - 2] - w);
        row[1] += (h / 12.0) * ia1;
        row[0] -= (h / 12.0) * ia0;
        row[i0] -= (h / 12.0) * (ia1 - ia0);
        row[n - 2] += (h / 12.0) * ib1;
        row[n - 1] -= (h / 12.0) * ib0;
        row[i0] -= (h / 12.0) * (ib1 - ib0);
    }
    return mat / M_PI;
}

}  // namespace patoct
