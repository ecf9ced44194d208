#include "patoct/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "patoct/expansion.hpp"
#include "patoct/galerkin1d.hpp"
#include "patoct/galerkin2d.hpp"
#include "patoct/hilbert.hpp"
#include "patoct/quadrature.hpp"

namespace patoct {

namespace {

using json = nlohmann::json;

DetectionDirection tilted(double angle) {
    return DetectionDirection{std::cos(angle), std::sin(angle)};
}

struct StageTimer {
    std::vector<std::pair<std::string, double>>* out;
    template <typename F>
    auto run(const char* name, F&& fn) -> decltype(fn()) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(fn())>) {
                fn();
                record(name, t0);
            } else {
                auto r = fn();
                record(name, t0);
                return r;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
        }
    }
    void record(const char* name, std::chrono::steady_clock::time_point t0) {
        const auto dt = std::chrono::steady_clock::now() - t0;
        out->emplace_back(name,
                          std::chrono::duration_cast<std::chrono::microseconds>(dt).count() /
                              1000.0);
    }
};

void freq_window(const ExperimentConfig& cfg, const Phantom& ph, double* lo, double* hi) {
    if (cfg.w_lo == 0.0 && cfg.w_hi == 0.0) {
        *lo = ph.w_lo;
        *hi = ph.w_hi;
    } else {
        *lo = cfg.w_lo;
        *hi = cfg.w_hi;
    }
}

void validate_config(const ExperimentConfig& cfg, const Phantom& ph) {
    if (cfg.config_version != 1)
        throw std::invalid_argument("config: unsupported config_version");
    if (cfg.n < 2 || cfg.n > kMaxBasisSize)
        throw std::invalid_argument("config: basis order n out of range");
    if (!cfg.use_lcurve && !(cfg.lambda > 0.0))
        throw std::invalid_argument("config: need a positive fixed lambda or lcurve = true");
    if (cfg.noise_p < 0.0 || cfg.noise_m < 0.0)
        throw std::invalid_argument("config: noise levels must be nonnegative");
    double wl, wh;
    freq_window(cfg, ph, &wl, &wh);
    if (!(wh > wl)) throw std::invalid_argument("config: empty frequency window");
    if (ph.dim == 1) {
        if (!cfg.directions.empty())
            throw std::invalid_argument("config: detection directions are 2-D only");
        if (cfg.pat_nodes_1d < 4 * (cfg.n - 1))
            throw std::invalid_argument("config: PAT grid too coarse for the basis order");
        if (cfg.oct_nodes_1d < std::max(512, 4 * (3 * cfg.n - 2)))
            throw std::invalid_argument("config: OCT grid too coarse");
    } else {
        if (cfg.directions.empty())
            throw std::invalid_argument("config: 2-D experiments need detection directions");
        for (const DetectionDirection& th : cfg.directions) validate_direction(th);
        if (cfg.pat_omega_nodes_2d < 4 * (cfg.n - 1) || cfg.pat_space_nodes_2d < 4 * (cfg.n - 1))
            throw std::invalid_argument("config: PAT grid too coarse for the basis order");
        if (cfg.oct_nodes_2d < std::max(256, 4 * (5 * cfg.n - 4)))
            throw std::invalid_argument("config: OCT grid too coarse");
    }
    if (cfg.use_lcurve &&
        (cfg.lcurve_points < 1 || !(cfg.lcurve_lo > 0.0) || !(cfg.lcurve_hi > cfg.lcurve_lo)))
        throw std::invalid_argument("config: bad lcurve grid parameters");
}

std::string resolved_phantom(const ExperimentConfig& cfg) {
    return cfg.phantom.empty() ? cfg.experiment : cfg.phantom;
}

struct ChiPair {
    HermiteExpansion p, pt;
};

ChiPair project_chi_1d(const Eigen::VectorXd& samples, const QuadRule& gw, const QuadRule& gx,
                       int N) {
    const std::vector<BasisSpec> bases{{N, 1.0, AxisRole::frequency}, {N, 2.0, AxisRole::space}};
    ChiPair c;
    c.p = project(samples, TensorGrid{{gw, gx}}, bases);
    c.pt = hilbert_coeffs(c.p, sign_overlap_matrix(N));
    return c;
}

ChiPair project_chi_2d(const Eigen::VectorXd& samples, const QuadRule& gw, const QuadRule& gs,
                       int N) {
    const std::vector<BasisSpec> bases{
        {N, 1.0, AxisRole::frequency}, {N, 1.0, AxisRole::space}, {N, 1.0, AxisRole::space}};
    ChiPair c;
    c.p = project(samples, TensorGrid{{gw, gs, gs}}, bases);
    c.pt = hilbert_coeffs(c.p, sign_overlap_matrix(N));
    return c;
}

Eigen::VectorXd planted_coeffs(const Phantom& ph, const QuadRule& gs, int N) {
    if (ph.dim == 1) {
        Eigen::VectorXd samples(gs.size());
        for (int j = 0; j < gs.size(); ++j) samples[j] = ph.gamma(gs.x[j], 0.0);
        return project(samples, TensorGrid{{gs}}, {{N, 2.0, AxisRole::space}}).coeffs();
    }
    Eigen::VectorXd samples(gs.size() * gs.size());
    for (int j = 0; j < gs.size(); ++j)
        for (int q = 0; q < gs.size(); ++q)
            samples[j * gs.size() + q] = ph.gamma(gs.x[j], gs.x[q]);
    return project(samples, TensorGrid{{gs, gs}},
                   {{N, 1.0, AxisRole::space}, {N, 1.0, AxisRole::space}})
        .coeffs();
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);  // binary: keep \n verbatim
    if (!os) throw std::runtime_error("cannot open " + path);
    os << body;
    if (!os) throw std::runtime_error("write failed for " + path);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_system_bin(const std::string& path, const Eigen::MatrixXcd& G,
                      const Eigen::VectorXcd& g) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os.write("PATOCTS1", 8);
    const std::uint32_t version = 1;
    os.write(reinterpret_cast<const char*>(&version), sizeof version);
    const std::uint64_t rows = G.rows(), cols = G.cols();
    os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    const auto put_cd = [&](std::complex<double> z) {
        const double re = z.real(), im = z.imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof re);
        os.write(reinterpret_cast<const char*>(&im), sizeof im);
    };
    for (Eigen::Index i = 0; i < G.rows(); ++i)
        for (Eigen::Index j = 0; j < G.cols(); ++j) put_cd(G(i, j));
    for (Eigen::Index i = 0; i < g.size(); ++i) put_cd(g[i]);
    if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace

ExperimentConfig preset_config(const std::string& id) {
    ExperimentConfig cfg;
    cfg.experiment = id;
    if (id == "ex1" || id == "ex2" || id == "ex3") {
        cfg.n = 15;
        cfg.lambda = 1e-4;
    } else if (id == "ex4") {
        cfg.n = 5;
        cfg.use_lcurve = true;
        cfg.directions = {DetectionDirection{0.0, 1.0}};
    } else if (id == "ex5") {
        cfg.n = 5;
        cfg.use_lcurve = true;
        cfg.clamp_negative = true;
        const double a = 5.0 * M_PI / 12.0;
        cfg.directions = {tilted(a), DetectionDirection{0.0, 1.0},
                          DetectionDirection{-std::cos(a), std::sin(a)}};
    } else {
        throw std::domain_error("preset_config: unknown experiment '" + id + "'");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& json_path) {
    std::ifstream is(json_path);
    if (!is) throw std::runtime_error("load_config: cannot open " + json_path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("load_config: " + std::string(e.what()));
    }
    if (!j.is_object()) throw std::runtime_error("load_config: top level must be an object");
    ExperimentConfig cfg;
    if (j.contains("experiment") && j["experiment"].get<std::string>() != "custom")
        cfg = preset_config(j["experiment"].get<std::string>());
    static const std::vector<std::string> known{
        "config_version", "experiment",     "phantom",       "n",
        "lambda",         "lcurve",         "noise_p",       "noise_m",
        "seed",           "out_dir",        "inverse_crime", "clamp_negative",
        "directions",     "freq_window",    "write_system",  "write_data",
        "pat_nodes_1d",   "pat_omega_nodes_2d", "pat_space_nodes_2d",
        "oct_nodes_1d",   "oct_nodes_2d",   "lcurve_points", "lcurve_lo",
        "lcurve_hi",      "gamma_out_nodes"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const std::string& k : known) ok = ok || (k == key);
        if (!ok) throw std::runtime_error("load_config: unknown key '" + key + "'");
    }
    if (j.contains("config_version")) cfg.config_version = j["config_version"].get<int>();
    if (j.contains("phantom")) cfg.phantom = j["phantom"].get<std::string>();
    if (j.contains("n")) cfg.n = j["n"].get<int>();
    if (j.contains("lambda")) {
        cfg.lambda = j["lambda"].get<double>();
        cfg.use_lcurve = false;
    }
    if (j.contains("lcurve")) cfg.use_lcurve = j["lcurve"].get<bool>();
    if (j.contains("noise_p")) cfg.noise_p = j["noise_p"].get<double>();
    if (j.contains("noise_m")) cfg.noise_m = j["noise_m"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("inverse_crime")) cfg.inverse_crime = j["inverse_crime"].get<bool>();
    if (j.contains("clamp_negative")) cfg.clamp_negative = j["clamp_negative"].get<bool>();
    if (j.contains("directions")) {
        cfg.directions.clear();
        for (const auto& d : j["directions"])
            cfg.directions.push_back(DetectionDirection{d.at(0).get<double>(),
                                                        d.at(1).get<double>()});
    }
    if (j.contains("freq_window")) {
        cfg.w_lo = j["freq_window"].at(0).get<double>();
        cfg.w_hi = j["freq_window"].at(1).get<double>();
    }
    if (j.contains("write_system")) cfg.write_system = j["write_system"].get<bool>();
    if (j.contains("write_data")) cfg.write_data = j["write_data"].get<bool>();
    if (j.contains("pat_nodes_1d")) cfg.pat_nodes_1d = j["pat_nodes_1d"].get<int>();
    if (j.contains("pat_omega_nodes_2d"))
        cfg.pat_omega_nodes_2d = j["pat_omega_nodes_2d"].get<int>();
    if (j.contains("pat_space_nodes_2d"))
        cfg.pat_space_nodes_2d = j["pat_space_nodes_2d"].get<int>();
    if (j.contains("oct_nodes_1d")) cfg.oct_nodes_1d = j["oct_nodes_1d"].get<int>();
    if (j.contains("oct_nodes_2d")) cfg.oct_nodes_2d = j["oct_nodes_2d"].get<int>();
    if (j.contains("lcurve_points")) cfg.lcurve_points = j["lcurve_points"].get<int>();
    if (j.contains("lcurve_lo")) cfg.lcurve_lo = j["lcurve_lo"].get<double>();
    if (j.contains("lcurve_hi")) cfg.lcurve_hi = j["lcurve_hi"].get<double>();
    if (j.contains("gamma_out_nodes")) cfg.gamma_out_nodes = j["gamma_out_nodes"].get<int>();
    return cfg;
}

SyntheticData make_clean_data(const ExperimentConfig& cfg, const Phantom& ph) {
    validate_config(cfg, ph);
    double wl, wh;
    freq_window(cfg, ph, &wl, &wh);
    SyntheticData d;
    d.mode = ph.dim;
    d.phantom_id = ph.id;
    d.delta_p = cfg.noise_p;
    d.delta_m = cfg.noise_m;
    d.seed = cfg.seed;
    d.directions = cfg.directions;
    if (ph.dim == 1) {
        const QuadRule gw = gauss_legendre(cfg.pat_nodes_1d, wl, wh);
        const QuadRule gx = gauss_legendre(cfg.pat_nodes_1d, ph.support_lo, ph.support_hi);
        d.pat_omega = gw.x;
        d.pat_x = gx.x;
        d.pat_clean = synth_pat(ph, gw.x, gx.x);
        if (cfg.inverse_crime) {
            const QuadRule rule = rhs_quadrature_rule_1d(wl, wh);
            d.oct_omega = rule.x;
            const ChiPair chi = project_chi_1d(d.pat_clean, gw, gx, cfg.n);
            const Eigen::VectorXd c = planted_coeffs(ph, gx, cfg.n);
            d.oct_clean = kernel_matrix_1d(chi.p, chi.pt, cfg.n, rule.x) * c;
        } else {
            d.oct_omega = uniform_grid(cfg.oct_nodes_1d, wl, wh);
            d.oct_clean = synth_oct_1d(ph, d.oct_omega);
        }
    } else {
        const QuadRule gw = gauss_legendre(cfg.pat_omega_nodes_2d, wl, wh);
        const QuadRule gs = gauss_legendre(cfg.pat_space_nodes_2d, ph.support_lo, ph.support_hi);
        d.pat_omega = gw.x;
        d.pat_x = gs.x;
        d.pat_y = gs.x;
        d.pat_clean = synth_pat(ph, gw.x, gs.x, gs.x);
        if (cfg.inverse_crime) {
            const QuadRule rule = rhs_quadrature_rule_2d(wl, wh);
            d.oct_omega = rule.x;
            const ChiPair chi = project_chi_2d(d.pat_clean, gw, gs, cfg.n);
            const Eigen::VectorXd c = planted_coeffs(ph, gs, cfg.n);
            d.oct_clean.resize(rule.size(), static_cast<Eigen::Index>(cfg.directions.size()));
            for (std::size_t k = 0; k < cfg.directions.size(); ++k)
                d.oct_clean.col(static_cast<Eigen::Index>(k)) =
                    kernel_matrix_2d(chi.p, chi.pt, cfg.n, cfg.directions[k], rule.x) * c;
        } else {
            d.oct_omega = uniform_grid(cfg.oct_nodes_2d, wl, wh);
            d.oct_clean = synth_oct_2d(ph, d.oct_omega, cfg.directions);
        }
    }
    d.pat_noisy = d.pat_clean;
    d.oct_noisy = d.oct_clean;
    return d;
}

RunResult run_on_data(const ExperimentConfig& cfg, const Phantom& ph, const SyntheticData& data) {
    validate_config(cfg, ph);
    if (data.mode != ph.dim)
        throw std::invalid_argument("run_on_data: data dimensionality does not match phantom");
    double wl, wh;
    freq_window(cfg, ph, &wl, &wh);
    const int N = cfg.n;
    RunResult rr;
    rr.cfg = cfg;
    StageTimer timer{&rr.timings_ms};

    Eigen::MatrixXcd G;
    Eigen::VectorXcd g;
    if (ph.dim == 1) {
        const QuadRule gw = gauss_legendre(cfg.pat_nodes_1d, wl, wh);
        const QuadRule gx = gauss_legendre(cfg.pat_nodes_1d, ph.support_lo, ph.support_hi);
        if (data.pat_omega.size() != gw.size() || data.pat_x.size() != gx.size())
            throw std::invalid_argument("run_on_data: data grids do not match the config");
        const ChiPair chi =
            timer.run("project", [&] { return project_chi_1d(data.pat_noisy, gw, gx, N); });
        G = timer.run("assemble", [&] { return assemble_A(chi.p, chi.pt, N, wl, wh); });
        g = timer.run("rhs", [&] {
            return assemble_rhs_m(data.oct_omega, data.oct_noisy.col(0), wl, wh, N);
        });
    } else {
        const QuadRule gw = gauss_legendre(cfg.pat_omega_nodes_2d, wl, wh);
        const QuadRule gs = gauss_legendre(cfg.pat_space_nodes_2d, ph.support_lo, ph.support_hi);
        if (data.pat_omega.size() != gw.size() || data.pat_x.size() != gs.size() ||
            data.pat_y.size() != gs.size())
            throw std::invalid_argument("run_on_data: data grids do not match the config");
        if (data.directions.size() != cfg.directions.size() ||
            data.oct_clean.cols() != static_cast<Eigen::Index>(cfg.directions.size()))
            throw std::invalid_argument("run_on_data: direction count mismatch");
        const ChiPair chi =
            timer.run("project", [&] { return project_chi_2d(data.pat_noisy, gw, gs, N); });
        const System2D sys = timer.run("assemble", [&] {
            std::vector<Tensor3C> bs;
            std::vector<Eigen::VectorXcd> rhss;
            for (std::size_t k = 0; k < cfg.directions.size(); ++k) {
                bs.push_back(assemble_B(chi.p, chi.pt, cfg.directions[k], N, wl, wh));
                rhss.push_back(assemble_rhs_theta(data.oct_omega,
                                                  data.oct_noisy.col(static_cast<Eigen::Index>(k)),
                                                  cfg.directions[k], wl, wh, N));
            }
            return stack_D(bs, rhss, cfg.directions);
        });
        G = sys.D;
        g = sys.d;
    }
    rr.rows = static_cast<int>(G.rows());
    rr.cols = static_cast<int>(G.cols());

    const TikhonovSolution sol = timer.run("solve", [&] {
        if (cfg.use_lcurve) {
            const Eigen::VectorXd grid =
                log_lambda_grid(cfg.lcurve_points, cfg.lcurve_lo, cfg.lcurve_hi);
            rr.lcurve = select_lambda_lcurve(G, g, grid);
            return solve_tikhonov_full(G, g, rr.lcurve.lambda_star());
        }
        return solve_tikhonov_full(G, g, cfg.lambda);
    });
    rr.x = sol.x;
    rr.lambda_used = cfg.use_lcurve ? rr.lcurve.lambda_star() : cfg.lambda;
    rr.residual_norm = sol.residual_norm;
    rr.solution_norm = sol.solution_norm;

    timer.run("fields", [&] {
        FieldRequest req;
        req.mode = ph.dim;
        req.order = N;
        req.clamp_negative = cfg.clamp_negative;
        if (ph.dim == 1) {
            req.gamma_x = uniform_grid(cfg.gamma_out_nodes > 0 ? cfg.gamma_out_nodes : 401,
                                       ph.support_lo, ph.support_hi);
        } else {
            const int gn = cfg.gamma_out_nodes > 0 ? cfg.gamma_out_nodes : 97;
            req.gamma_x = uniform_grid(gn, ph.support_lo, ph.support_hi);
            req.gamma_y = req.gamma_x;
        }
        req.pat_omega = data.pat_omega;
        req.pat_x = data.pat_x;
        req.pat_y = data.pat_y;
        req.pat_noisy = data.pat_noisy;
        rr.fields = reconstruct_fields(rr.x, req);
        rr.gamma_x = req.gamma_x;
        rr.gamma_y = req.gamma_y;
    });

    timer.run("metrics", [&] {
        if (ph.dim == 1) {
            rr.gamma_truth.resize(rr.gamma_x.size());
            for (Eigen::Index i = 0; i < rr.gamma_x.size(); ++i)
                rr.gamma_truth[i] = ph.gamma(rr.gamma_x[i], 0.0);
            rr.rel_l2_gamma = error_metrics(rr.fields.gamma, rr.gamma_truth, {rr.gamma_x});
            rr.im_chi_truth.resize(data.pat_clean.size());
            for (Eigen::Index i = 0; i < data.pat_omega.size(); ++i)
                for (Eigen::Index j = 0; j < data.pat_x.size(); ++j)
                    rr.im_chi_truth[i * data.pat_x.size() + j] =
                        ph.im_psi(data.pat_omega[i], data.pat_x[j], 0.0);
            rr.rel_l2_imchi = error_metrics(rr.fields.im_chi, rr.im_chi_truth,
                                            {data.pat_omega, data.pat_x});
        } else {
            const Eigen::Index gn = rr.gamma_x.size();
            rr.gamma_truth.resize(gn * gn);
            for (Eigen::Index i = 0; i < gn; ++i)
                for (Eigen::Index j = 0; j < gn; ++j)
                    rr.gamma_truth[i * gn + j] = ph.gamma(rr.gamma_x[i], rr.gamma_y[j]);
            rr.rel_l2_gamma =
                error_metrics(rr.fields.gamma, rr.gamma_truth, {rr.gamma_x, rr.gamma_y});
            const Eigen::Index nx = data.pat_x.size(), ny = data.pat_y.size();
            rr.im_chi_truth.resize(data.pat_clean.size());
            for (Eigen::Index i = 0; i < data.pat_omega.size(); ++i)
                for (Eigen::Index j = 0; j < nx; ++j)
                    for (Eigen::Index q = 0; q < ny; ++q)
                        rr.im_chi_truth[(i * nx + j) * ny + q] =
                            ph.im_psi(data.pat_omega[i], data.pat_x[j], data.pat_y[q]);
            rr.rel_l2_imchi = error_metrics(rr.fields.im_chi, rr.im_chi_truth,
                                            {data.pat_omega, data.pat_x, data.pat_y});
        }
        if (cfg.inverse_crime) {
            const QuadRule gs =
                gauss_legendre(ph.dim == 1 ? cfg.pat_nodes_1d : cfg.pat_space_nodes_2d,
                               ph.support_lo, ph.support_hi);
            const Eigen::VectorXd c = planted_coeffs(ph, gs, N);
            rr.rel_coeff_error = (rr.x - c).norm() / c.norm();
        }
    });
    rr.G = G;
    rr.g = g;
    return rr;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    const Phantom ph = phantom_by_id(resolved_phantom(cfg));
    std::vector<std::pair<std::string, double>> pre_timings;
    StageTimer timer{&pre_timings};
    SyntheticData data = timer.run("synth", [&] { return make_clean_data(cfg, ph); });
    timer.run("noise", [&] { add_noise(data); });
    RunResult rr = run_on_data(cfg, ph, data);
    rr.timings_ms.insert(rr.timings_ms.begin(), pre_timings.begin(), pre_timings.end());
    StageTimer post{&rr.timings_ms};

    post.run("artifacts", [&] {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        const auto path = [&](const char* f) { return (fs::path(cfg.out_dir) / f).string(); };

        std::string gcsv;
        if (ph.dim == 1) {
            gcsv = "y,truth,reconstruction\n";
            for (Eigen::Index i = 0; i < rr.gamma_x.size(); ++i)
                gcsv += fmt17(rr.gamma_x[i]) + "," + fmt17(rr.gamma_truth[i]) + "," +
                        fmt17(rr.fields.gamma[i]) + "\n";
        } else {
            gcsv = "x,y,truth,reconstruction\n";
            const Eigen::Index gn = rr.gamma_y.size();
            for (Eigen::Index i = 0; i < rr.gamma_x.size(); ++i)
                for (Eigen::Index j = 0; j < gn; ++j)
                    gcsv += fmt17(rr.gamma_x[i]) + "," + fmt17(rr.gamma_y[j]) + "," +
                            fmt17(rr.gamma_truth[i * gn + j]) + "," +
                            fmt17(rr.fields.gamma[i * gn + j]) + "\n";
        }
        write_text(path("gamma.csv"), gcsv);

        std::string icsv;
        if (ph.dim == 1) {
            icsv = "omega,x,truth,reconstruction\n";
            const Eigen::Index nx = data.pat_x.size();
            for (Eigen::Index i = 0; i < data.pat_omega.size(); ++i)
                for (Eigen::Index j = 0; j < nx; ++j)
                    icsv += fmt17(data.pat_omega[i]) + "," + fmt17(data.pat_x[j]) + "," +
                            fmt17(rr.im_chi_truth[i * nx + j]) + "," +
                            fmt17(rr.fields.im_chi[i * nx + j]) + "\n";
        } else {
            // The frequency plane nearest w = 0 (a plot-ready cross-section;
            // the full 3-D field stays in memory only).
            icsv = "omega,x,y,truth,reconstruction\n";
            Eigen::Index iw0 = 0;
            data.pat_omega.cwiseAbs().minCoeff(&iw0);
            const Eigen::Index nx = data.pat_x.size(), ny = data.pat_y.size();
            for (Eigen::Index j = 0; j < nx; ++j)
                for (Eigen::Index q = 0; q < ny; ++q) {
                    const Eigen::Index flat = (iw0 * nx + j) * ny + q;
                    icsv += fmt17(data.pat_omega[iw0]) + "," + fmt17(data.pat_x[j]) + "," +
                            fmt17(data.pat_y[q]) + "," + fmt17(rr.im_chi_truth[flat]) + "," +
                            fmt17(rr.fields.im_chi[flat]) + "\n";
                }
        }
        write_text(path("imchi.csv"), icsv);

        if (cfg.use_lcurve) {
            std::string lcsv = "lambda,residual_norm,solution_norm,curvature,selected\n";
            for (Eigen::Index i = 0; i < rr.lcurve.lambda.size(); ++i)
                lcsv += fmt17(rr.lcurve.lambda[i]) + "," + fmt17(rr.lcurve.residual_norm[i]) +
                        "," + fmt17(rr.lcurve.solution_norm[i]) + "," +
                        fmt17(rr.lcurve.curvature[i]) + "," +
                        (i == rr.lcurve.best_index ? "1" : "0") + "\n";
            write_text(path("lcurve.csv"), lcsv);
        }

        json mj;
        mj["experiment"] = cfg.experiment;
        mj["phantom"] = ph.id;
        mj["mode"] = ph.dim;
        mj["n"] = cfg.n;
        mj["seed"] = cfg.seed;
        mj["delta_p"] = cfg.noise_p;
        mj["delta_m"] = cfg.noise_m;
        mj["inverse_crime"] = cfg.inverse_crime;
        mj["clamp_negative"] = cfg.clamp_negative;
        mj["lcurve_used"] = cfg.use_lcurve;
        mj["lcurve_degenerate"] = rr.lcurve.degenerate;
        mj["lambda_used"] = rr.lambda_used;
        mj["residual_norm"] = rr.residual_norm;
        mj["solution_norm"] = rr.solution_norm;
        mj["rel_l2_gamma"] = rr.rel_l2_gamma;
        mj["rel_l2_imchi"] = rr.rel_l2_imchi;
        if (rr.rel_coeff_error >= 0.0) mj["rel_coeff_error"] = rr.rel_coeff_error;
        mj["system_rows"] = rr.rows;
        mj["system_cols"] = rr.cols;
        double wl, wh;
        freq_window(cfg, ph, &wl, &wh);
        mj["freq_window"] = {wl, wh};
        json dirs = json::array();
        for (const DetectionDirection& th : cfg.directions)
            dirs.push_back({th.theta2, th.theta3});
        mj["directions"] = dirs;
        mj["versions"] = {{"artifact", "0.1.0"}, {"config_schema", 1}, {"data_format", 1}};
        std::string vol = "timestamp=" + utc_timestamp();
        for (const auto& [name, ms] : rr.timings_ms)
            vol += ";" + name + "_ms=" + fmt17(ms);
        mj["volatile"] = vol;
        write_text(path("metrics.json"), mj.dump(2) + "\n");

        if (cfg.write_data) save_synthetic(data, path("data.bin"), path("data.json"));
        if (cfg.write_system) write_system_bin(path("system.bin"), rr.G, rr.g);
    });
    return rr;
}

}  // namespace patoct
