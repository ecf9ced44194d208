#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "patoct/inverse.hpp"
#include "patoct/phantom.hpp"
#include "patoct/synth.hpp"

namespace patoct {

// One experiment: phantom -> seeded synthetic data -> projections -> Galerkin
// assembly -> Tikhonov solve (fixed lambda or L-curve) -> fields -> metrics.
// Presets ex1..ex5 mirror the worked examples; every knob can be overridden
// in a JSON config (schema documented in the README, versioned).
struct ExperimentConfig {
    int config_version = 1;
    std::string experiment = "custom";
    std::string phantom;  // defaults to `experiment` when empty
    int n = 0;            // basis order N
    double lambda = -1.0; // fixed regularization weight; ignored when use_lcurve
    bool use_lcurve = false;
    double noise_p = 0.03, noise_m = 0.03;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    bool inverse_crime = false;
    bool clamp_negative = false;
    std::vector<DetectionDirection> directions;  // 2-D only
    double w_lo = 0.0, w_hi = 0.0;  // frequency window override (0,0 = phantom's)
    bool write_system = false, write_data = false;
    // Grid sizes (projection quadratures and forward traces).
    int pat_nodes_1d = 257;
    int pat_omega_nodes_2d = 129, pat_space_nodes_2d = 97;
    int oct_nodes_1d = 1024, oct_nodes_2d = 512;
    int lcurve_points = 25;
    double lcurve_lo = 1e-8, lcurve_hi = 1.0;
    int gamma_out_nodes = 0;  // 0 = default (401 in 1-D, 97 per axis in 2-D)
};

ExperimentConfig preset_config(const std::string& id);
ExperimentConfig load_config(const std::string& json_path);

struct RunResult {
    ExperimentConfig cfg;
    int rows = 0, cols = 0;     // assembled system dimensions
    Eigen::MatrixXcd G;         // assembled system (small at the worked sizes)
    Eigen::VectorXcd g;
    Eigen::VectorXd x;
    double lambda_used = 0.0, residual_norm = 0.0, solution_norm = 0.0;
    double rel_l2_gamma = -1.0, rel_l2_imchi = -1.0;
    double rel_coeff_error = -1.0;  // planted-coefficient recovery (inverse crime)
    LCurve lcurve;                  // populated when use_lcurve
    Fields fields;
    Eigen::VectorXd gamma_truth, im_chi_truth;  // on the output / PAT grids
    Eigen::VectorXd gamma_x, gamma_y;           // gamma output axes
    std::vector<std::pair<std::string, double>> timings_ms;
};

// Forward stage only: grids per config, clean PAT + OCT (or the in-span
// kernel trace when cfg.inverse_crime), noisy copies equal to clean.
SyntheticData make_clean_data(const ExperimentConfig& cfg, const Phantom& ph);

// Inverse stage: projections, assembly, solve, fields and metrics from an
// already noise-carrying data set.  No disk output.
RunResult run_on_data(const ExperimentConfig& cfg, const Phantom& ph, const SyntheticData& data);

// Full pipeline plus artifacts in cfg.out_dir: gamma.csv, imchi.csv,
// metrics.json, lcurve.csv (when the L-curve ran), data.bin/data.json and
// system.bin on request.  Any stage failure is rethrown tagged with the
// stage name.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace patoct
