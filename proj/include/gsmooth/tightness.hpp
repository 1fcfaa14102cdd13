#pragma once

#include "gsmooth/gaussian.hpp"
#include "gsmooth/paths.hpp"
#include "gsmooth/stats.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gsmooth {

enum class Validity { Restricted, AllScales };
enum class ConditionForm { MinOfTwo, SingleIncrement };

/// Increment condition P(... > a) ≤ K |t-s|^β / a^γ.
struct ChentsovCondition {
    double K = 1.0;
    double beta = 2.0;
    double gamma = 4.0;
    Validity validity = Validity::AllScales;
    ConditionForm form = ConditionForm::SingleIncrement;
};

/// Tail φ used by the chaining bound for short-scale oscillation or jumps.
struct DiscreteTail {
    enum class Kind { PowerLaw, Tabulated, Jump };
    Kind kind = Kind::PowerLaw;
    /// PowerLaw and Jump: φ(η) = c n^{1-p/2} η^{-p}.
    double c = 1.0;
    double p = 3.0;
    double n = 1.0;
    /// Tabulated: (η, φ) pairs sorted by η, φ nonincreasing.
    std::vector<std::pair<double, double>> table;

    static DiscreteTail power_law(double c, double p, double n);
    static DiscreteTail jump(double c, double p, double n);
    static DiscreteTail tabulated(std::vector<std::pair<double, double>> table);

    double operator()(double eta) const;
};

/// Chaining ratio ψ = 2^{-(β-1)/(2γ)}.
double chaining_psi(double beta, double gamma);

/// (9/(1-ψ))^γ 2^β Σ_{r≥1} (2^{β-1}ψ^γ)^{-r}; throws divergent-constant when
/// the geometric ratio is ≤ 1.
double chaining_series_constant(double beta, double gamma, double psi);

/// Full constant C' = K · chaining_series_constant · (1 + ε/T).
double chaining_constant(const ChentsovCondition& cond, double epsilon, double horizon,
                         std::optional<double> psi = std::nullopt);

/// Upper bound for P(‖Y_ε - Y‖ > √d λ):
///   d T { 2 φ(λ(1-ψ)/18) + C' ε^{β-1} / λ^γ }.
/// The φ term is dropped for single-increment conditions valid at all scales.
double chaining_bound(const ChentsovCondition& cond, const std::optional<DiscreteTail>& phi,
                      double n, double epsilon, double lambda, double horizon, std::size_t dim);

/// Moment/mixing certificate of a strongly mixing stationary-type sequence.
struct MixingModel {
    double p = 4.0;
    double c_p = 1.0;
    double k = 1.0;
    double b = 3.0;

    /// r = 1 + (p-1) b / (p+b).
    double r() const noexcept { return 1.0 + (p - 1.0) * b / (p + b); }
};

/// 2 (1 + 2 Σ_{j≥1} (k j^{-b})^{(p-2)/p}).
double mixing_covariance_constant(const MixingModel& model);

/// C with P(sup_{s≤u≤t}|Y(u)-Y(s)| ≥ 4λ c_p) ≤ C (t-s)^{r/2} λ^{-r} for n(t-s) ≥ 1/2.
double mixing_increment_constant(const MixingModel& model);

/// P(‖Y_ε - Y‖ ≥ a c_p) ≤ 12^r C T (1 + ε/T) a^{-r} ε^{r/2-1}, for ε > 1/(2n).
double mixing_mod_bound(const MixingModel& model, double epsilon, double a, double horizon, double n);

/// Rosenthal-type constant default (2p)^p.
double default_rosenthal_constant(double p);

/// Chentsov parameters for normalized i.i.d. partial sums with E|W|^p = abs_moment_p.
ChentsovCondition iid_chentsov_condition(double p, double abs_moment_p,
                                         std::optional<double> rosenthal = std::nullopt);

/// Jump tail φ(η) = 2 E|W|^p n^{1-p/2} η^{-p}, so that T φ(θ/2) = 2^{p+1} E|W|^p T n^{1-p/2} θ^{-p}.
DiscreteTail iid_jump_tail(double p, double abs_moment_p, double n);

/// Envelope for P(‖X_{n,ε} - X_n‖ ≥ θ); requires p ≥ 3 and ε ∈ (1/n, 1).
double iid_partial_sum_envelope(double p, double abs_moment_p, double n, double epsilon,
                                double theta, double horizon,
                                std::optional<double> rosenthal = std::nullopt);

/// Fraction of paths with ‖w_ε - w‖ ≥ θ with a Wilson 95% interval.
ProportionEstimate empirical_mod_tail(std::span<const PiecewisePath> paths, double epsilon,
                                      double theta, unsigned workers = 0);

/// Same from precomputed sup-differences ‖w_ε - w‖.
ProportionEstimate empirical_tail_from_differences(std::span<const double> differences, double theta);

/// Uniform interface for tail bounds (ε, threshold) ↦ probability in [0, 1].
struct TailEnvelope {
    std::string source;
    std::map<std::string, double> params;
    double eps_min = 0.0;          // exclusive lower end of ε validity
    double eps_max = 1.0;          // exclusive upper end of ε validity
    bool eps_max_inclusive = false;
    std::function<double(double, double)> raw; // unclamped bound

    bool valid_at(double epsilon) const noexcept;
    /// Clamped to [0, 1]; throws parameter-domain outside the ε range.
    double operator()(double epsilon, double threshold) const;
    /// Unclamped value; throws parameter-domain outside the ε range.
    double unclamped(double epsilon, double threshold) const;

    static TailEnvelope zero();
    static TailEnvelope gaussian(const GaussianKernel& kernel, double gamma, double horizon);
    static TailEnvelope iid(double p, double abs_moment_p, double n, double horizon,
                            std::optional<double> rosenthal = std::nullopt);
    static TailEnvelope mixing(const MixingModel& model, double n, double horizon);
    static TailEnvelope chaining(const ChentsovCondition& cond, std::optional<DiscreteTail> phi,
                                 double n, double horizon, std::size_t dim);
};

} // namespace gsmooth
