#include "patoct/synth.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "patoct/hilbert.hpp"
#include "patoct/quadrature.hpp"

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

namespace patoct {

namespace {

using cd = std::complex<double>;

void check_axis(const Eigen::VectorXd& x, const char* name) {
    if (x.size() < 2) throw std::invalid_argument(std::string("synth_pat: axis ") + name + " too short");
    for (Eigen::Index i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument(std::string("synth_pat: axis ") + name +
                                        " must be strictly increasing");
}

Eigen::VectorXd synth_pat_impl(const Phantom& ph, const Eigen::VectorXd& omega,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    check_axis(omega, "omega");
    check_axis(x, "x");
    const bool two_d = y.size() > 0;
    if (two_d) check_axis(y, "y");
    if ((ph.dim == 2) != two_d)
        throw std::invalid_argument("synth_pat: phantom dimension does not match the grid");

    const Eigen::Index nw = omega.size(), nx = x.size(), ny = two_d ? y.size() : 1;
    Eigen::VectorXd psi(nw * nx * ny);
    for (Eigen::Index i = 0; i < nw; ++i)
        for (Eigen::Index j = 0; j < nx; ++j)
            for (Eigen::Index q = 0; q < ny; ++q)
                psi[(i * nx + j) * ny + q] = ph.im_psi(omega[i], x[j], two_d ? y[q] : 0.0);

    Eigen::VectorXd gam(nx * ny);
    for (Eigen::Index j = 0; j < nx; ++j)
        for (Eigen::Index q = 0; q < ny; ++q)
            gam[j * ny + q] = ph.gamma(x[j], two_d ? y[q] : 0.0);

    // p is only defined where Im psi lives; gamma must be bounded away from
    // zero there.  The support is read relative to the grid maximum so that
    // harmless underflow-level tails of Im psi outside the gamma bumps do not
    // trip the check.
    const double psi_max = psi.cwiseAbs().maxCoeff();
    const double psi_floor = 1e-12 * psi_max;
    Eigen::VectorXd p(psi.size());
    for (Eigen::Index i = 0; i < nw; ++i)
        for (Eigen::Index s = 0; s < nx * ny; ++s) {
            const double v = psi[i * nx * ny + s];
            const double g = gam[s];
            if (std::abs(v) > psi_floor && g < 1e-12)
                throw std::domain_error(
                    "synth_pat: degenerate pair, gamma vanishes on the support of Im psi");
            p[i * nx * ny + s] = (v != 0.0 && g != 0.0) ? v / g : 0.0;
        }
    return p;
}

// Shared principal-value synthesis.  `slopes` holds one phase slope per
// (direction, spatial node): m(w_i, k) = sum_c wy_c (H psi + i psi)(w_i, y_c)
// * exp(-i w_i a_{k,c}).  The PV transform acts along the frequency axis on a
// `ratio`-times finer uniform grid over the data window itself (plus the
// stencil margin), matching the windowed Hilbert transform of the data model.
Eigen::MatrixXcd oct_core(const Phantom& ph, const Eigen::VectorXd& omega, int ratio,
                          double extension, const Eigen::MatrixXd& y_nodes,
                          const Eigen::VectorXd& wy, const Eigen::MatrixXd& slopes) {
    const Eigen::Index n = omega.size();
    const double h0 = omega[1] - omega[0];
    for (Eigen::Index i = 1; i < n; ++i)
        if (std::abs((omega[i] - omega[i - 1]) - h0) > 1e-12 * std::abs(h0))
            throw std::invalid_argument("synth_oct: frequency grid must be uniform");

    int off = 0;
    const Eigen::VectorXd fine = pv_extend_grid(omega, ratio, extension, &off);
    const Eigen::MatrixXd pv = pv_hilbert_matrix(fine, omega);
    const Eigen::Index nf = fine.size(), ncol = wy.size();
    const Eigen::Index K = slopes.rows();

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, K);
    const Eigen::Index block = 1024;
    Eigen::MatrixXd psi_f(nf, std::min(block, ncol));
    Eigen::MatrixXd hp(n, std::min(block, ncol));
    for (Eigen::Index c0 = 0; c0 < ncol; c0 += block) {
        const Eigen::Index nb = std::min(block, ncol - c0);
        for (Eigen::Index c = 0; c < nb; ++c)
            for (Eigen::Index f = 0; f < nf; ++f)
                psi_f(f, c) = ph.im_psi(fine[f], y_nodes(0, c0 + c), y_nodes(1, c0 + c));
        hp.leftCols(nb).noalias() = pv * psi_f.leftCols(nb);
        for (Eigen::Index k = 0; k < K; ++k)
            for (Eigen::Index c = 0; c < nb; ++c) {
                const double a = slopes(k, c0 + c);
                // exp(-i w_i a) by phase recurrence along the uniform grid.
                cd phase = std::exp(cd(0.0, -omega[0] * a));
                const cd step = std::exp(cd(0.0, -h0 * a));
                const double wgt = wy[c0 + c];
                for (Eigen::Index i = 0; i < n; ++i) {
                    m(i, k) += wgt * cd(hp(i, c), psi_f(off + i * ratio, c)) * phase;
                    phase *= step;
                }
            }
    }
    return m;
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kPatStream = 0x7061742d73747231ull;
constexpr std::uint64_t kOctStream = 0x6f63742d73747232ull;

void put_bytes(std::ofstream& os, const void* p, std::size_t nbytes) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(nbytes));
}
template <typename T>
void put(std::ofstream& os, T v) {
    put_bytes(os, &v, sizeof v);
}
void put_vec(std::ofstream& os, const Eigen::VectorXd& v) {
    put_bytes(os, v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
}

void get_bytes(std::ifstream& is, void* p, std::size_t nbytes) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(nbytes));
    if (!is) throw std::runtime_error("load_synthetic: truncated file");
}
template <typename T>
T get(std::ifstream& is) {
    T v;
    get_bytes(is, &v, sizeof v);
    return v;
}
Eigen::VectorXd get_vec(std::ifstream& is, std::uint64_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    get_bytes(is, v.data(), sizeof(double) * n);
    return v;
}

}  // namespace

Eigen::VectorXd synth_pat(const Phantom& ph, const Eigen::VectorXd& omega,
                          const Eigen::VectorXd& x) {
    return synth_pat_impl(ph, omega, x, Eigen::VectorXd());
}

Eigen::VectorXd synth_pat(const Phantom& ph, const Eigen::VectorXd& omega,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return synth_pat_impl(ph, omega, x, y);
}

Eigen::VectorXcd synth_oct_1d(const Phantom& ph, const Eigen::VectorXd& omega, int pv_ratio,
                              double pv_extension) {
    if (ph.dim != 1) throw std::invalid_argument("synth_oct_1d: phantom is not one-dimensional");
    if (omega.size() < 512)
        throw std::invalid_argument("synth_oct_1d: frequency grid below the 512-node bound");
    const QuadRule yr = composite_gauss_legendre(32, 32, ph.support_lo, ph.support_hi);
    Eigen::MatrixXd nodes(2, yr.size());
    nodes.row(0) = yr.x.transpose();
    nodes.row(1).setZero();
    Eigen::MatrixXd slopes = 2.0 * yr.x.transpose();  // e^{-2 i w y}
    return oct_core(ph, omega, pv_ratio, pv_extension, nodes, yr.w, slopes).col(0);
}

Eigen::MatrixXcd synth_oct_2d(const Phantom& ph, const Eigen::VectorXd& omega,
                              const std::vector<DetectionDirection>& dirs, int pv_ratio,
                              double pv_extension) {
    if (ph.dim != 2) throw std::invalid_argument("synth_oct_2d: phantom is not two-dimensional");
    if (omega.size() < 256)
        throw std::invalid_argument("synth_oct_2d: frequency grid below the 256-node bound");
    if (dirs.empty()) throw std::invalid_argument("synth_oct_2d: no detection directions");
    for (const DetectionDirection& th : dirs) validate_direction(th);

    const QuadRule yr = composite_gauss_legendre(32, 6, ph.support_lo, ph.support_hi);
    const Eigen::Index ny = yr.size();
    Eigen::MatrixXd nodes(2, ny * ny);
    Eigen::VectorXd wy(ny * ny);
    Eigen::MatrixXd slopes(static_cast<Eigen::Index>(dirs.size()), ny * ny);
    for (Eigen::Index q = 0; q < ny; ++q)
        for (Eigen::Index t = 0; t < ny; ++t) {
            const Eigen::Index c = q * ny + t;
            nodes(0, c) = yr.x[q];
            nodes(1, c) = yr.x[t];
            wy[c] = yr.w[q] * yr.w[t];
            for (std::size_t k = 0; k < dirs.size(); ++k)
                slopes(static_cast<Eigen::Index>(k), c) =
                    dirs[k].theta2 * yr.x[q] + dirs[k].tilde3() * yr.x[t];
        }
    return oct_core(ph, omega, pv_ratio, pv_extension, nodes, wy, slopes);
}

double gaussian_at(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t s = mix64(seed ^ mix64(index));
    const std::uint64_t a = mix64(s ^ 0x243F6A8885A308D3ull);
    const std::uint64_t b = mix64(s ^ 0x13198A2E03707344ull);
    const double u1 = 1.0 - static_cast<double>(a >> 11) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void add_noise(SyntheticData& data) {
    if (data.delta_p < 0.0 || data.delta_m < 0.0)
        throw std::domain_error("add_noise: noise levels must be nonnegative");

    if (data.delta_p == 0.0) {
        data.pat_noisy = data.pat_clean;
    } else {
        const std::uint64_t sp = mix64(data.seed ^ kPatStream);
        Eigen::VectorXd v(data.pat_clean.size());
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v[i] = gaussian_at(sp, static_cast<std::uint64_t>(i));
        const double scale = data.delta_p * data.pat_clean.norm() / v.norm();
        data.pat_noisy = data.pat_clean + scale * v;
    }

    if (data.delta_m == 0.0) {
        data.oct_noisy = data.oct_clean;
    } else {
        const std::uint64_t sm = mix64(data.seed ^ kOctStream);
        Eigen::MatrixXcd w(data.oct_clean.rows(), data.oct_clean.cols());
        std::uint64_t idx = 0;
        for (Eigen::Index k = 0; k < w.cols(); ++k)
            for (Eigen::Index i = 0; i < w.rows(); ++i) {
                const double re = gaussian_at(sm, idx++);
                const double im = gaussian_at(sm, idx++);
                w(i, k) = cd(re, im);
            }
        const double scale = data.delta_m * data.oct_clean.norm() / w.norm();
        data.oct_noisy = data.oct_clean + scale * w;
    }
}

SyntheticData synthesize(const Phantom& ph, const Eigen::VectorXd& pat_omega,
                         const Eigen::VectorXd& pat_x, const Eigen::VectorXd& pat_y,
                         const std::vector<DetectionDirection>& dirs, int n_oct_omega,
                         double delta_p, double delta_m, std::uint64_t seed, int pv_ratio,
                         double pv_extension) {
    SyntheticData d;
    d.mode = ph.dim;
    d.phantom_id = ph.id;
    d.delta_p = delta_p;
    d.delta_m = delta_m;
    d.seed = seed;
    d.pat_omega = pat_omega;
    d.pat_x = pat_x;
    d.pat_y = pat_y;
    d.directions = dirs;
    d.pat_clean = (ph.dim == 1) ? synth_pat(ph, pat_omega, pat_x)
                                : synth_pat(ph, pat_omega, pat_x, pat_y);
    d.oct_omega = uniform_grid(n_oct_omega, ph.w_lo, ph.w_hi);
    if (ph.dim == 1) {
        if (!dirs.empty()) throw std::invalid_argument("synthesize: directions given in 1-D");
        d.oct_clean = synth_oct_1d(ph, d.oct_omega, pv_ratio, pv_extension);
    } else {
        d.oct_clean = synth_oct_2d(ph, d.oct_omega, dirs, pv_ratio, pv_extension);
    }
    add_noise(d);
    return d;
}

void save_synthetic(const SyntheticData& data, const std::string& bin_path,
                    const std::string& json_path) {
    std::ofstream os(bin_path, std::ios::binary);
    if (!os) throw std::runtime_error("save_synthetic: cannot open " + bin_path);
    os.write("PATOCT01", 8);
    put<std::uint32_t>(os, 1u);  // format version
    put<std::uint32_t>(os, static_cast<std::uint32_t>(data.mode));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(data.phantom_id.size()));
    put_bytes(os, data.phantom_id.data(), data.phantom_id.size());
    put<double>(os, data.delta_p);
    put<double>(os, data.delta_m);
    put<std::uint64_t>(os, data.seed);
    const std::uint64_t sizes[6] = {
        static_cast<std::uint64_t>(data.pat_omega.size()),
        static_cast<std::uint64_t>(data.pat_x.size()),
        static_cast<std::uint64_t>(data.pat_y.size()),
        static_cast<std::uint64_t>(data.pat_clean.size()),
        static_cast<std::uint64_t>(data.oct_omega.size()),
        static_cast<std::uint64_t>(data.directions.size())};
    put_bytes(os, sizes, sizeof sizes);
    put_vec(os, data.pat_omega);
    put_vec(os, data.pat_x);
    put_vec(os, data.pat_y);
    put_vec(os, data.pat_clean);
    put_vec(os, data.pat_noisy);
    put_vec(os, data.oct_omega);
    for (const DetectionDirection& th : data.directions) {
        put<double>(os, th.theta2);
        put<double>(os, th.theta3);
    }
    const Eigen::Index kcols = data.oct_clean.cols();
    for (const Eigen::MatrixXcd* mp : {&data.oct_clean, &data.oct_noisy})
        for (Eigen::Index i = 0; i < mp->rows(); ++i)
            for (Eigen::Index k = 0; k < kcols; ++k) {
                put<double>(os, (*mp)(i, k).real());
                put<double>(os, (*mp)(i, k).imag());
            }
    if (!os) throw std::runtime_error("save_synthetic: write failed for " + bin_path);
    os.close();

    nlohmann::json j;
    j["format"] = "patoct-synth";
    j["format_version"] = 1;
    j["binary"] = bin_path;
    j["phantom"] = data.phantom_id;
    j["mode"] = data.mode;
    j["delta_p"] = data.delta_p;
    j["delta_m"] = data.delta_m;
    j["seed"] = data.seed;
    j["n_pat_omega"] = data.pat_omega.size();
    j["n_pat_x"] = data.pat_x.size();
    j["n_pat_y"] = data.pat_y.size();
    j["n_oct_omega"] = data.oct_omega.size();
    nlohmann::json dj = nlohmann::json::array();
    for (const DetectionDirection& th : data.directions) dj.push_back({th.theta2, th.theta3});
    j["directions"] = dj;
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("save_synthetic: cannot open " + json_path);
    js << j.dump(2) << "\n";
}

SyntheticData load_synthetic(const std::string& bin_path) {
    std::ifstream is(bin_path, std::ios::binary);
    if (!is) throw std::runtime_error("load_synthetic: cannot open " + bin_path);
    char magic[8];
    get_bytes(is, magic, 8);
    if (std::memcmp(magic, "PATOCT01", 8) != 0)
        throw std::runtime_error("load_synthetic: bad magic in " + bin_path);
    if (get<std::uint32_t>(is) != 1u)
        throw std::runtime_error("load_synthetic: unsupported format version");
    SyntheticData d;
    d.mode = static_cast<int>(get<std::uint32_t>(is));
    const std::uint32_t id_len = get<std::uint32_t>(is);
    if (id_len > 4096) throw std::runtime_error("load_synthetic: implausible id length");
    d.phantom_id.resize(id_len);
    if (id_len) get_bytes(is, d.phantom_id.data(), id_len);
    d.delta_p = get<double>(is);
    d.delta_m = get<double>(is);
    d.seed = get<std::uint64_t>(is);
    std::uint64_t sizes[6];
    get_bytes(is, sizes, sizeof sizes);
    for (std::uint64_t s : sizes)
        if (s > (1ull << 32)) throw std::runtime_error("load_synthetic: implausible array size");
    d.pat_omega = get_vec(is, sizes[0]);
    d.pat_x = get_vec(is, sizes[1]);
    d.pat_y = get_vec(is, sizes[2]);
    d.pat_clean = get_vec(is, sizes[3]);
    d.pat_noisy = get_vec(is, sizes[3]);
    d.oct_omega = get_vec(is, sizes[4]);
    d.directions.resize(sizes[5]);
    for (DetectionDirection& th : d.directions) {
        th.theta2 = get<double>(is);
        th.theta3 = get<double>(is);
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(sizes[4]);
    const Eigen::Index kcols = d.mode == 1 ? 1 : static_cast<Eigen::Index>(sizes[5]);
    for (Eigen::MatrixXcd* mp : {&d.oct_clean, &d.oct_noisy}) {
        mp->resize(rows, kcols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index k = 0; k < kcols; ++k) {
                const double re = get<double>(is);
                const double im = get<double>(is);
                (*mp)(i, k) = cd(re, im);
            }
    }
    return d;
}

}  // namespace patoct
