#pragma once

#include "gsmooth/functionals.hpp"
#include "gsmooth/paths.hpp"
#include "gsmooth/stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gsmooth {

/// Parameters of h_{ε,δ}(w) = E h(w_ε + δB) on [0, T] in R^d.
struct SmoothingParams {
    double epsilon = 0.1;
    double delta = 0.1;
    double horizon = 1.0;
    std::size_t dim = 1;

    /// ε, δ > 0, T ≥ 1, d ≥ 1.
    void validate() const;
    /// Additionally ε, δ ∈ (0, 1).
    void validate_unit() const;
};

struct DerivativeEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Partition of {0, ..., n-1} into blocks of size one or two.
using Partition = std::vector<std::vector<int>>;

/// All partitions with blocks of size ≤ 2, in a fixed order; n ≤ 8.
std::vector<Partition> enumerate_p2_partitions(int n);

/// Simulation grid for B: breakpoints of w_ε and of each regularized direction,
/// the functional's evaluation times, and a uniform refinement with spacing
/// ≤ min(ε, δ²)/8. Points closer than 1e-12·T are merged.
std::vector<double> smoothing_grid(const PiecewisePath& w, std::span<const PiecewisePath> directions,
                                   const Functional& h, const SmoothingParams& params);

/// Monte-Carlo mean of h(w_ε + δB).
DerivativeEstimate smooth_eval(const Functional& h, const PiecewisePath& w, const SmoothingParams& params,
                               const MonteCarlo& mc);

/// D^n h_{ε,δ}(w)[x_1..x_n] = E[h(w_ε + δB) Σ_{π ∈ P_{n,2}} Π_b D̂^{|b|}[x_b]] with
/// D̂¹[x] = δ⁻¹ ∫∇x_ε dB and D̂²[x,y] = -δ⁻² ∫<∇x_ε, ∇y_ε>. n ≤ 3; each
/// direction must satisfy x_ε(0) = 0.
DerivativeEstimate derivative_estimate(const Functional& h, const PiecewisePath& w,
                                       std::span<const PiecewisePath> directions,
                                       const SmoothingParams& params, const MonteCarlo& mc);

/// δ⁻² Cov(h(w_ε + δB), ∫∇x_ε dB · ∫∇y_ε dB).
DerivativeEstimate d2_covariance_estimate(const Functional& h, const PiecewisePath& w, const PiecewisePath& x,
                                          const PiecewisePath& y, const SmoothingParams& params,
                                          const MonteCarlo& mc);

/// Central finite difference of h_{ε,δ} along one or two directions with
/// common random numbers; `step` defaults to 1e-3 · ‖direction‖.
DerivativeEstimate finite_difference_estimate(const Functional& h, const PiecewisePath& w,
                                              std::span<const PiecewisePath> directions,
                                              const SmoothingParams& params, const MonteCarlo& mc,
                                              double relative_step = 1e-3);

// ---------------------------------------------------------------------------
// Closed-form constants

/// 1 + √T(εδ)⁻¹ + √2 T(εδ)⁻² + √(50/π) T^{3/2}(εδ)⁻³.
double c_eps_delta_T(double epsilon, double delta, double horizon);

/// sup|h| · C_{ε,δ,T}.
double m0_norm_bound(const SmoothingParams& params, double sup_h);

struct SmoothnessCertificate {
    enum class Kind { Bounded, Lipschitz };
    Kind kind = Kind::Bounded;
    double value = 1.0; // sup|h| or ‖Dh‖
};

/// Constant c with |D²h_{ε,δ}[x₁I_r, x₂(I_s - I_t)]| ≤ c|x₁||x₂||t-s|^{1/2}:
/// sup|h| √T (εδ)⁻² or ‖Dh‖ π^{-1/2} ε⁻² δ⁻¹.
double m0c_constant(const SmoothingParams& params, const SmoothnessCertificate& cert);

/// C_k = max(E|G|^k · card(P_{k,2}), published value) with C₁ = 1, C₂ = 3.
double derivative_constant(int k);

/// sup|h| T^{k/2} C_k (εδ)^{-k}.
double derivative_norm_bound(const SmoothingParams& params, double sup_h, int k);

/// √(2T) δ⁻² ε⁻¹ ‖z‖ sup|h| √energy.
double d2_energy_bound(const SmoothingParams& params, double z_norm, double sup_h, double energy);

/// √(2/π) (δε)⁻¹ ‖z‖ ‖Dh‖ √energy.
double d2_energy_lipschitz_bound(const SmoothingParams& params, double z_norm, double lip_h, double energy);

/// ‖Dⁿh‖ C_k T^{k/2} ε^{-n-k} δ^{-k}.
double lipschitz_derivative_bound(const SmoothingParams& params, double dn_norm, int n, int k);

/// M⁰ norm of h_{ε,δ} for sup|h| ≤ 1, ‖Dh‖ ≤ 1 and ε, δ ∈ (0,1): 6 T ε⁻³ δ⁻².
double lipschitz_m0_bound(const SmoothingParams& params);

} // namespace gsmooth
