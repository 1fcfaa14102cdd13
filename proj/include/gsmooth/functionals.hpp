#pragma once

#include "gsmooth/paths.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gsmooth {

/// a·x ≤ b (or a·x < b when strict) on the vector x = (w(t_1), ..., w(t_k)).
struct Halfspace {
    std::vector<double> a;
    double b = 0.0;
};

struct SupIndicatorSpec {
    double level = 0.0;
    std::size_t coord = 0;
    bool strict = false; // {sup < level} instead of {sup ≤ level}
};

struct FiniteDimSpec {
    std::vector<double> times;
    std::vector<Halfspace> halfspaces;
    bool strict = false;
};

/// Φ((Σ_i <a_i, w(t_i)> - offset) / scale).
struct SmoothCylinderSpec {
    std::vector<double> times;
    std::vector<std::vector<double>> weights; // one d-vector per time
    double offset = 0.0;
    double scale = 1.0;
};

/// clamp(slope (sup w_c - level), 0, 1).
struct ClampedSupSpec {
    double level = 0.0;
    double slope = 1.0;
    std::size_t coord = 0;
};

struct ConstantSpec {
    double value = 0.0;
};

struct CustomSpec {
    std::string name;
    std::function<double(const PathView&)> fn;
    std::optional<double> sup_bound;
};

/// Test functional h on paths, with certified sup and Lipschitz bounds.
class Functional {
public:
    enum class Kind { SupIndicator, FiniteDimIndicator, SmoothCylinder, ClampedSupLipschitz, Constant, Custom };

    static Functional sup_indicator(double level, std::size_t coord = 0, bool strict = false);
    static Functional finite_dim_indicator(std::vector<double> times, std::vector<Halfspace> halfspaces,
                                           bool strict = false);
    static Functional smooth_cylinder(std::vector<double> times, std::vector<std::vector<double>> weights,
                                      double offset, double scale);
    static Functional clamped_sup_lipschitz(double level, double slope = 1.0, std::size_t coord = 0);
    static Functional constant(double value);
    /// Uncertified user closure; never accepted by bound pipelines.
    static Functional custom(std::string name, std::function<double(const PathView&)> fn,
                             std::optional<double> sup_bound = std::nullopt);

    Kind kind() const noexcept;
    std::string_view name() const noexcept;
    bool certified() const noexcept { return kind() != Kind::Custom; }
    bool is_indicator() const noexcept {
        return kind() == Kind::SupIndicator || kind() == Kind::FiniteDimIndicator;
    }

    double operator()(const PathView& w) const;
    double operator()(const PiecewisePath& w) const { return (*this)(w.view()); }

    /// sup |h|.
    double sup_bound() const;
    /// ‖Dh‖ when h is Lipschitz; none for indicators.
    std::optional<double> lip_bound() const;
    /// Dh(w)[v] for smooth cylinders (exact); parameter-domain for other kinds.
    double directional_derivative(const PathView& w, const PathView& v) const;

    /// Smallest dimension the functional reads; evaluation on a thinner path is a shape error.
    std::size_t min_dim() const noexcept;
    /// Times at which the functional reads the path (empty for sup functionals).
    std::vector<double> evaluation_times() const;

    const SupIndicatorSpec* as_sup() const noexcept { return std::get_if<SupIndicatorSpec>(&spec_); }
    const FiniteDimSpec* as_finite_dim() const noexcept { return std::get_if<FiniteDimSpec>(&spec_); }
    const SmoothCylinderSpec* as_cylinder() const noexcept { return std::get_if<SmoothCylinderSpec>(&spec_); }
    const ClampedSupSpec* as_clamped() const noexcept { return std::get_if<ClampedSupSpec>(&spec_); }

private:
    using Spec = std::variant<SupIndicatorSpec, FiniteDimSpec, SmoothCylinderSpec, ClampedSupSpec,
                              ConstantSpec, CustomSpec>;
    explicit Functional(Spec spec) : spec_(std::move(spec)) {}
    Spec spec_;
};

/// Running maximum of one coordinate, exact for step and linear paths.
double path_sup(const PathView& w, std::size_t coord);

enum class Provenance { Derived, UserSupplied };

std::string_view to_string(Provenance p) noexcept;

/// Measurable set K given by an indicator functional; c' bounds P(Z ∈ K^θ \ K^{-θ}) ≤ c'θ.
struct SetK {
    Functional indicator;
    std::optional<double> user_constant;

    explicit SetK(Functional f, std::optional<double> c = std::nullopt);

    Provenance provenance() const noexcept {
        return user_constant ? Provenance::UserSupplied : Provenance::Derived;
    }
    bool contains(const PathView& w) const { return indicator(w) != 0.0; }
    bool contains(const PiecewisePath& w) const { return contains(w.view()); }
};

/// Boundary constant c' against a standard Brownian target on [0, T]:
/// user-supplied, or derived for sup-level sets (2 · 2/√(2πT)) and for
/// one-time finite-dimensional sets (2 m / √(2π t_1), m halfspaces).
double boundary_constant(const SetK& K, double horizon);

struct Enlargement {
    SetK outer; // ⊇ K^θ
    SetK inner; // ⊆ K^{-θ}
};

Enlargement enlarge(const SetK& K, double theta);

/// min(1, c' θ).
double boundary_enlargement_bound(const SetK& K, double theta, double horizon);

} // namespace gsmooth
