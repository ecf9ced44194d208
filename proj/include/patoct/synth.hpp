#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "patoct/galerkin2d.hpp"
#include "patoct/phantom.hpp"

namespace patoct {

// One synthetic experiment: PAT samples p = Im psi / gamma on a tensor
// measurement grid plus OCT traces m on their own (finer, uniform) frequency
// grid, clean and noise-carrying copies of both.
struct SyntheticData {
    int mode = 1;  // spatial dimensions
    std::string phantom_id;
    double delta_p = 0.0, delta_m = 0.0;
    std::uint64_t seed = 0;
    Eigen::VectorXd pat_omega;  // PAT frequency nodes
    Eigen::VectorXd pat_x;      // first spatial axis nodes
    Eigen::VectorXd pat_y;      // second spatial axis nodes (empty in 1-D)
    Eigen::VectorXd pat_clean, pat_noisy;  // flat row-major over (w, x[, y])
    Eigen::VectorXd oct_omega;             // uniform OCT frequency grid
    std::vector<DetectionDirection> directions;  // empty in 1-D
    Eigen::MatrixXcd oct_clean, oct_noisy;       // one column per direction
};

// PAT internal data p(w, x) = Im psi / gamma where Im psi is nonzero and 0
// elsewhere.  Raises std::domain_error when gamma < 1e-12 somewhere on the
// numerical support of Im psi (|Im psi| above 1e-12 of its grid maximum).
Eigen::VectorXd synth_pat(const Phantom& ph, const Eigen::VectorXd& omega,
                          const Eigen::VectorXd& x);
Eigen::VectorXd synth_pat(const Phantom& ph, const Eigen::VectorXd& omega,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// OCT traces by discretised principal value in the frequency direction and
// composite Gauss-Legendre in space:
//   1-D  m(w) = int (H_w[Im psi] + i Im psi)(w, y) e^{-2 i w y} dy
//   2-D  m(w, theta) = int (H_w[Im psi] + i Im psi)(w, y) e^{-i w (theta2 y2
//                      + (theta3+1) y3)} dy2 dy3
// The principal value runs over the data window itself: the fine grid refines
// `omega` in place (pv_extension widens it only when explicitly requested).
// `omega` must be uniform and dense (>= 512 nodes in 1-D, >= 256 in 2-D;
// keep it at least 4x denser than any projection grid used downstream).
Eigen::VectorXcd synth_oct_1d(const Phantom& ph, const Eigen::VectorXd& omega,
                              int pv_ratio = 4, double pv_extension = 0.0);
Eigen::MatrixXcd synth_oct_2d(const Phantom& ph, const Eigen::VectorXd& omega,
                              const std::vector<DetectionDirection>& dirs,
                              int pv_ratio = 4, double pv_extension = 0.0);

// Deterministic counter-based N(0,1) stream (splitmix-style mixing plus
// Box-Muller), addressable by (seed, index).
double gaussian_at(std::uint64_t seed, std::uint64_t index);

// Fill the *_noisy fields from the clean ones: additive i.i.d. normal noise
// scaled to an exact relative level, real for PAT and complex for OCT,
// delta = 0 leaving bit-identical copies.  Negative levels raise
// std::domain_error.
void add_noise(SyntheticData& data);

// Full forward run: PAT samples on the given tensor grid, OCT traces on a
// fresh uniform grid of n_oct_omega nodes spanning the phantom's frequency
// window, then noise.  Pass empty pat_y / dirs in 1-D.
SyntheticData synthesize(const Phantom& ph, const Eigen::VectorXd& pat_omega,
                         const Eigen::VectorXd& pat_x, const Eigen::VectorXd& pat_y,
                         const std::vector<DetectionDirection>& dirs, int n_oct_omega,
                         double delta_p, double delta_m, std::uint64_t seed,
                         int pv_ratio = 4, double pv_extension = 0.0);

// Flat binary image (magic "PATOCT01", little-endian doubles) plus a JSON
// sidecar describing the run; loading restores the struct bit for bit.
void save_synthetic(const SyntheticData& data, const std::string& bin_path,
                    const std::string& json_path);
SyntheticData load_synthetic(const std::string& bin_path);

}  // namespace patoct
