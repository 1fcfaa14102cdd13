#pragma once

#include "gsmooth/bounds.hpp"
#include "gsmooth/harness.hpp"
#include "gsmooth/paths.hpp"
#include "gsmooth/smoothing.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gsmooth {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);
/// Strict inverse of format_double; malformed text is a config error.
double parse_double(std::string_view text);

/// Header `t,v1,...,vd`, one knot per line.
void write_path_csv(std::ostream& out, const PiecewisePath& path);
PiecewisePath read_path_csv(std::istream& in, double horizon, Interpolation mode);

void write_csv(std::ostream& out, const CsvTable& table);

Interpolation parse_interpolation(std::string_view name);
std::string_view to_string(Interpolation mode) noexcept;

Json to_json(const DerivativeEstimate& e, const SmoothingParams& params, std::string_view quantity);
Json to_json(const BoundBreakdown& b);
Json to_json(const TailEnvelope& e);
Json to_json(const RateParams& r);
Json to_json(const OptimizeResult& r);
Json to_json(const SearchBox& b);

Json report_json(const Report& report);
std::string rows_csv(const Report& report);
std::string trace_csv(const Report& report);
std::string trace_csv(const std::vector<TracePoint>& trace);
/// Writes report.json, rows.csv, trace.csv and plotdata/*.csv under `dir`.
void write_report(const Report& report, const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Experiment configuration

struct ExperimentConfig {
    std::uint64_t seed = 0;
    double horizon = 1.0;
    std::size_t dim = 1;
    std::optional<ProcessModel> model;
    std::optional<SetK> set;
    std::optional<Functional> functional;
    Objective objective = Objective::Indicator;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    bool kappa_order_only = false;
    bool kappa_missing = false; // no kappa block and no model to derive n from
    TailEnvelope x_tail = TailEnvelope::zero();
    TailEnvelope z_tail = TailEnvelope::zero();
    /// ε, δ, θ, γ at which `bound` evaluates; absent means "optimize".
    std::optional<std::array<double, 4>> params;
    SearchBox box;
    OptimizeOptions optimizer;
    std::size_t samples = 100000;
    std::size_t paths = 10000;
    std::optional<SmoothingParams> smoothing;
    std::vector<PiecewisePath> directions;
    std::optional<PiecewisePath> path;
    bool finite_difference = false;
    double fd_relative_step = 1e-3;
};

Functional functional_from_json(const Json& j);
SetK set_from_json(const Json& j);
ProcessModel model_from_json(const Json& j, double horizon);
TailEnvelope envelope_from_json(const Json& j, const ExperimentConfig& context);
/// Inline knots, an indicator shorthand, or a CSV file resolved against `base_dir`.
PiecewisePath path_from_json(const Json& j, double horizon, std::size_t dim, const std::filesystem::path& base_dir);

/// Parses a schema-1 experiment config; any problem is a config error.
ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {});

TheoremInputs theorem_inputs(const ExperimentConfig& config);

} // namespace gsmooth
