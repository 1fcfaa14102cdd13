#pragma once

#include "gsmooth/paths.hpp"
#include "gsmooth/random.hpp"
#include "gsmooth/stats.hpp"

#include <cstdint>
#include <vector>

namespace gsmooth {

double normal_cdf(double x) noexcept;
double normal_pdf(double x) noexcept;

/// Simulation grid and seed for a d-dimensional standard Brownian motion.
struct BrownianConfig {
    std::size_t dim = 1;
    double horizon = 1.0;
    std::vector<double> grid; // strictly increasing, grid.front() == 0, grid.back() == horizon
    std::uint64_t seed = 0;
};

/// n equal steps on [0, T].
std::vector<double> uniform_grid(double horizon, std::size_t steps);

/// Throws parameter-domain unless the grid starts at 0, ends at T and increases strictly.
void validate_grid(std::span<const double> grid, double horizon);

/// Fills `values` (knot-major, grid.size()*dim) with Brownian values on the grid.
/// The normals are drawn coordinate-fastest, one per increment.
void fill_brownian(std::span<const double> grid, std::size_t dim, Rng& rng, std::span<double> values);

/// Linear interpolation of exact Brownian marginals on the grid; deterministic
/// in (config.seed, index).
PiecewisePath sample_bm(const BrownianConfig& config, std::uint64_t index);

/// 2d exp(-z²/(2dT)), an upper bound for P(‖B‖ ≥ z) on [0, T].
double bm_supnorm_tail(double z, std::size_t dim, double horizon);

/// P(max_{[0,T]} B ≤ y) for a one-dimensional Brownian motion.
double bm_max_cdf(double y, double horizon);

/// Increment-variance envelope E(Z(v) - Z(u))² ≤ k |v - u|^τ.
struct GaussianKernel {
    double k = 1.0;
    double tau = 1.0;
};

/// P(‖Z_ε - Z‖ > λ) ≤ T Ĉ ε^{τγ/2-1} λ^{-γ} with Ĉ from the chaining constant
/// applied to the single-increment bound k^{γ/2} E|G|^γ |t-s|^{τγ/2} a^{-γ}.
double gaussian_regularization_tail(const GaussianKernel& kernel, double gamma, double epsilon,
                                    double lambda, double horizon);

/// E|G|^k for G ~ N(0,1); k may be any real > -1.
double abs_gaussian_moment(double k);

/// E‖B‖ over [0,1] for a standard d-dimensional Brownian motion.
/// Exact √(π/2) for d = 1; Monte Carlo on a fine grid for d > 1.
struct ExpectedSupNorm {
    double value = 0.0;
    double std_error = 0.0;
    bool exact = false;
};
ExpectedSupNorm expected_bm_supnorm(std::size_t dim, const MonteCarlo& mc = {}, std::size_t steps = 2048);

} // namespace gsmooth
