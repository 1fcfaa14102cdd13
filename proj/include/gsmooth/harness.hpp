#pragma once

#include "gsmooth/bounds.hpp"
#include "gsmooth/functionals.hpp"
#include "gsmooth/paths.hpp"
#include "gsmooth/random.hpp"
#include "gsmooth/stats.hpp"
#include "gsmooth/tightness.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace gsmooth {

enum class Innovation { Rademacher, Uniform, Exponential, StudentT };

std::string_view to_string(Innovation d) noexcept;
Innovation parse_innovation(std::string_view name);

/// X_n(s) = n^{-1/2} Σ_{i ≤ ⌊ns⌋} W_i with i.i.d. centred unit-variance W.
struct IidPartialSum {
    Innovation distribution = Innovation::Rademacher;
    std::size_t n = 1000;
    double p = 4.0;  // moment order used by the envelopes
    double nu = 5.0; // Student-t degrees of freedom, ν > max(2, p)
};

/// Y(t) = n^{-1/2} Σ_{j ≤ ⌊nt⌋} X_j with X_1 = U_1, X_j = ρ X_{j-1} + √(1-ρ²) U_j and
/// U uniform on (-√3, √3). The mixing certificate (k, b) is supplied by the user.
struct MixingSum {
    double rho = 0.5;
    std::size_t n = 1000;
    MixingModel certificate{4.0, 0.0, 1.0, 3.0}; // c_p = 0 means "use the a.s. bound"
};

struct ProcessModel {
    std::variant<IidPartialSum, MixingSum> variant = IidPartialSum{};
    double horizon = 1.0;

    void validate() const;
    std::size_t n() const noexcept;
    double moment_order() const noexcept;
    /// E|W₁|^p for i.i.d. models, (a.s. bound)^p for the autoregression.
    double abs_moment() const;
    /// Upper bound for ‖X_j‖_p (the c_p of the mixing envelope).
    double lp_norm_bound() const;
    /// Envelope for P(‖X_ε - X‖ ≥ θ) matching the model.
    TailEnvelope envelope(std::optional<double> rosenthal = std::nullopt) const;
};

/// Draws one innovation sequence value of an i.i.d. model (unit variance).
double draw_innovation(const IidPartialSum& model, Rng& rng);

/// Step path with knots j/n, j = 0..⌊nT⌋, holding the exact partial sums.
PiecewisePath simulate_partial_sum(const ProcessModel& model, Rng& rng);

struct DiscrepancyEstimate {
    ProportionEstimate x_side;
    double z_side = 0.0;
    double z_std_error = 0.0; // zero when the Z side is exact
    bool z_exact = true;
    double discrepancy = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// P(Z ∈ K) for a standard Brownian motion on [0, T] when a closed form exists.
std::optional<double> exact_bm_probability(const SetK& K, double horizon);

/// |P(X_n ∈ K) - P(Z ∈ K)|: Monte Carlo for X with a Wilson interval; exact Z
/// side for sup-level and one-time sets, otherwise Monte Carlo on a fine grid.
DiscrepancyEstimate estimate_set_discrepancy(const ProcessModel& model, const SetK& K, const MonteCarlo& mc);

// ---------------------------------------------------------------------------
// Reports

/// Closed set of claim tags carried by every report row.
enum class Tag {
    SmoothingBound,
    LevyProkhorovBound,
    LipschitzBound,
    ChainingLemma,
    MixingLemma,
    GaussianTail,
    BrownianSupTail,
    BoundaryEnlargement,
    DerivativeFormula,
    DerivativeBounds,
    SecondDerivativeSmoothness,
    RateExample,
    PartitionCount,
    PathRegularization,
    Plumbing,
};

std::string_view to_string(Tag t) noexcept;

enum class RowKind {
    Domination,  // bound ≥ upper CI of the empirical value
    Agreement,   // |difference| ≤ 3 combined standard errors
    Exact,       // equality up to a stated tolerance
    Consistency, // deterministic inequality between computed quantities
    Envelope,    // estimate minus 3 standard errors does not exceed the bound
};

std::string_view to_string(RowKind k) noexcept;

struct ReportRow {
    std::string id;
    std::string quantity;
    Tag tag = Tag::Plumbing;
    RowKind kind = RowKind::Domination;
    double bound = 0.0;
    double empirical = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double margin = 0.0; // ≥ 0 exactly when the row passes
    bool pass = false;
    std::string note;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct NamedTrace {
    std::string id;
    std::vector<TracePoint> points;
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    double budget_scale = 1.0;
    std::vector<ReportRow> rows;
    std::vector<NamedTrace> traces;
    std::map<std::string, CsvTable> plotdata;
    std::set<std::string> exercised; // operations called while producing the report
    std::vector<std::string> notes;

    bool passed() const noexcept;
    std::size_t failures() const noexcept;
};

enum class Suite { Rates, Gaussian, Tightness, Smoothing, Theorem, All };

std::string_view to_string(Suite s) noexcept;
Suite parse_suite(std::string_view name);

struct ValidateOptions {
    Suite suite = Suite::All;
    std::uint64_t seed = 0;
    double budget_scale = 1.0;
    unsigned workers = 0;
    std::size_t scalar_samples = 100000; // default budget for scalar estimates
    std::size_t path_samples = 10000;    // default budget for path-level tails
};

/// Operations every full run must exercise.
const std::vector<std::string>& required_operations();

/// Runs a validation suite. Rows are independent of `workers`.
Report run_validation(const ValidateOptions& options);

} // namespace gsmooth
