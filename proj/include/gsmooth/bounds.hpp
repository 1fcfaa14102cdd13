#pragma once

#include "gsmooth/functionals.hpp"
#include "gsmooth/smoothing.hpp"
#include "gsmooth/tightness.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gsmooth {

/// Exact rational number with positive denominator in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Expectation envelope ε ↦ upper bound for E‖Y_ε - Y‖.
using MeanEnvelope = std::function<double(double)>;

/// E‖Y_ε - Y‖ ≤ ∫_0^∞ min(1, tail(ε, u)) du, integrated numerically.
double mean_from_tail(const TailEnvelope& tail, double epsilon);
MeanEnvelope mean_envelope_from_tail(TailEnvelope tail);

/// Order-only default κ = c T n^{-1/2}.
double order_only_kappa(double c, double horizon, double n);

struct TheoremInputs {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    bool kappa_order_only = false;
    double horizon = 1.0;
    std::size_t dim = 1;
    TailEnvelope x_tail = TailEnvelope::zero();
    TailEnvelope z_tail = TailEnvelope::zero();
    std::optional<SetK> set;
    // Lipschitz data.
    MeanEnvelope x_mean;
    MeanEnvelope z_mean;
    std::optional<double> bm_sup_mean; // E‖B‖ over [0,1]
};

/// Terms of the indicator bound at one parameter point. `total` is the raw sum;
/// `objective` is the quantity that was minimized.
struct BoundBreakdown {
    double stein = 0.0;
    double smoothness = 0.0;
    double x_tail = 0.0;
    double z_tail = 0.0;
    double bm = 0.0;
    double boundary = 0.0;
    double total = 0.0;
    double objective = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    double theta = 0.0;
    double gamma = 0.0;

    double presented() const noexcept { return total < 0.0 ? 0.0 : (total > 1.0 ? 1.0 : total); }
};

BoundBreakdown theorem_bound(const TheoremInputs& in, double epsilon, double delta, double theta, double gamma);

/// max{2(θ+γ), stein + smoothness + x_tail + z_tail + bm}.
double lp_bound(const TheoremInputs& in, double epsilon, double delta, double theta, double gamma);

/// Terms of the Lipschitz-functional bound: x_tail/z_tail hold E‖·_ε - ·‖, bm holds
/// 2√T δ E‖B‖, stein holds 6Tε⁻³δ⁻²κ₁, smoothness holds π^{-1/2}ε⁻²δ⁻¹κ₂.
BoundBreakdown lipschitz_breakdown(const TheoremInputs& in, double epsilon, double delta);
double lipschitz_bound(const TheoremInputs& in, double epsilon, double delta);

enum class Objective { Indicator, LevyProkhorov, Lipschitz };

std::string_view to_string(Objective o) noexcept;

struct SearchBox {
    double eps_lo = 1e-3, eps_hi = 0.999;
    double delta_lo = 1e-3, delta_hi = 0.999;
    double theta_lo = 1e-3, theta_hi = 10.0;
    double gamma_lo = 1e-3, gamma_hi = 10.0;
};

struct OptimizeOptions {
    int budget = 4;   // grid level L: 2^L + 1 log-spaced points per axis
    int rounds = 3;   // coordinate-descent rounds
    unsigned workers = 0;
    std::vector<BoundBreakdown> extra_candidates; // parameter points evaluated in addition to the grid
};

struct TracePoint {
    std::string stage;
    double epsilon, delta, theta, gamma, objective;
};

struct OptimizeResult {
    BoundBreakdown best;
    SearchBox box; // after intersection with envelope validity
    std::vector<TracePoint> trace;
};

BoundBreakdown evaluate_objective(const TheoremInputs& in, Objective objective, double epsilon, double delta,
                                  double theta, double gamma);

/// Log-grid search followed by per-axis golden-section refinement. The result
/// is the best over grid levels 4..budget, so a larger budget never returns a
/// larger objective.
OptimizeResult optimize_bound(const TheoremInputs& in, Objective objective, const SearchBox& box,
                              const OptimizeOptions& options = {});

struct RateParams {
    double epsilon = 0.0;
    double delta = 0.0;
    double theta = 0.0;
    double gamma = 0.0;
    double rate = 0.0;                 // predicted rate value at n
    std::optional<Rational> exponent;  // rate exponent in n when T = 1 and p is an integer
    Rational exponent_limit;           // p → ∞
};

/// Closed-form balancing for the indicator bound with i.i.d. partial sums.
RateParams example_rate_params(double p, double horizon, double n);

/// Closed-form choice for Lipschitz functionals.
RateParams example_lipschitz_params(double p, double n);

/// (p - 2)/(20p - 4) and (p - 2)/(18p - 12).
Rational indicator_rate_exponent(std::int64_t p);
Rational lipschitz_rate_exponent(std::int64_t p);

} // namespace gsmooth
