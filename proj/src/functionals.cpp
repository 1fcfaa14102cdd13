#include "gsmooth/functionals.hpp"

#include "gsmooth/errors.hpp"
#include "gsmooth/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gsmooth {

namespace {

double euclid(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void check_times(const std::vector<double>& times) {
    require(!times.empty(), ErrorKind::ParameterDomain, "functional needs at least one evaluation time");
    for (std::size_t i = 0; i < times.size(); ++i) {
        require(std::isfinite(times[i]) && times[i] >= 0.0, ErrorKind::ParameterDomain,
                "evaluation times must be finite and nonnegative");
        if (i > 0) require(times[i] > times[i - 1], ErrorKind::ParameterDomain, "evaluation times must increase");
    }
}

double cylinder_argument(const SmoothCylinderSpec& s, const PathView& w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const auto& a = s.weights[i];
        for (std::size_t c = 0; c < a.size(); ++c) acc += a[c] * w.eval_coord(s.times[i], c);
    }
    return (acc - s.offset) / s.scale;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

double path_sup(const PathView& w, std::size_t coord) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < w.knot_count(); ++k) best = std::max(best, w.values[k * w.dim + coord]);
    return best;
}

Functional Functional::sup_indicator(double level, std::size_t coord, bool strict) {
    require(std::isfinite(level), ErrorKind::ParameterDomain, "level must be finite");
    return Functional(SupIndicatorSpec{level, coord, strict});
}

Functional Functional::finite_dim_indicator(std::vector<double> times, std::vector<Halfspace> halfspaces,
                                            bool strict) {
    check_times(times);
    require(!halfspaces.empty(), ErrorKind::ParameterDomain, "finite-dimensional set needs halfspaces");
    for (const auto& h : halfspaces) {
        require(h.a.size() == times.size(), ErrorKind::Shape, "halfspace normal must have one entry per time");
        require(std::isfinite(h.b), ErrorKind::ParameterDomain, "halfspace offset must be finite");
    }
    return Functional(FiniteDimSpec{std::move(times), std::move(halfspaces), strict});
}

Functional Functional::smooth_cylinder(std::vector<double> times, std::vector<std::vector<double>> weights,
                                       double offset, double scale) {
    check_times(times);
    require(weights.size() == times.size(), ErrorKind::Shape, "one weight vector per time");
    require(scale > 0.0, ErrorKind::ParameterDomain, "cylinder scale must be positive");
    const std::size_t d = weights.front().size();
    require(d >= 1, ErrorKind::Shape, "weights must be nonempty");
    for (const auto& a : weights) require(a.size() == d, ErrorKind::Shape, "weight vectors must share dimension");
    return Functional(SmoothCylinderSpec{std::move(times), std::move(weights), offset, scale});
}

Functional Functional::clamped_sup_lipschitz(double level, double slope, std::size_t coord) {
    require(slope > 0.0 && std::isfinite(level), ErrorKind::ParameterDomain, "clamped sup needs slope > 0");
    return Functional(ClampedSupSpec{level, slope, coord});
}

Functional Functional::constant(double value) {
    require(std::isfinite(value), ErrorKind::ParameterDomain, "constant must be finite");
    return Functional(ConstantSpec{value});
}

Functional Functional::custom(std::string name, std::function<double(const PathView&)> fn,
                              std::optional<double> sup_bound) {
    require(static_cast<bool>(fn), ErrorKind::MissingInput, "custom functional needs a callable");
    return Functional(CustomSpec{std::move(name), std::move(fn), sup_bound});
}

Functional::Kind Functional::kind() const noexcept { return static_cast<Kind>(spec_.index()); }

std::string_view Functional::name() const noexcept {
    switch (kind()) {
    case Kind::SupIndicator: return "sup_indicator";
    case Kind::FiniteDimIndicator: return "finite_dim_indicator";
    case Kind::SmoothCylinder: return "smooth_cylinder";
    case Kind::ClampedSupLipschitz: return "clamped_sup_lipschitz";
    case Kind::Constant: return "constant";
    case Kind::Custom: return std::get<CustomSpec>(spec_).name;
    }
    return "unknown";
}

std::size_t Functional::min_dim() const noexcept {
    return std::visit(overloaded{
                          [](const SupIndicatorSpec& s) { return s.coord + 1; },
                          [](const FiniteDimSpec&) { return std::size_t{1}; },
                          [](const SmoothCylinderSpec& s) { return s.weights.front().size(); },
                          [](const ClampedSupSpec& s) { return s.coord + 1; },
                          [](const auto&) { return std::size_t{0}; },
                      },
                      spec_);
}

std::vector<double> Functional::evaluation_times() const {
    if (const auto* f = as_finite_dim()) return f->times;
    if (const auto* c = as_cylinder()) return c->times;
    return {};
}

double Functional::operator()(const PathView& w) const {
    require(w.dim >= min_dim(), ErrorKind::Shape, "path dimension too small for this functional");
    if (as_finite_dim() != nullptr) {
        require(w.dim == 1, ErrorKind::Shape, "finite-dimensional sets are defined for d = 1");
    }
    if (const auto* c = as_cylinder()) {
        require(w.dim == c->weights.front().size(), ErrorKind::Shape, "cylinder weights must match path dimension");
    }
    return std::visit(overloaded{
                          [&](const SupIndicatorSpec& s) {
                              const double m = path_sup(w, s.coord);
                              return (s.strict ? m < s.level : m <= s.level) ? 1.0 : 0.0;
                          },
                          [&](const FiniteDimSpec& s) {
                              for (const auto& h : s.halfspaces) {
                                  double dot = 0.0;
                                  for (std::size_t i = 0; i < s.times.size(); ++i) {
                                      dot += h.a[i] * w.eval_coord(s.times[i], 0);
                                  }
                                  if (s.strict ? !(dot < h.b) : !(dot <= h.b)) return 0.0;
                              }
                              return 1.0;
                          },
                          [&](const SmoothCylinderSpec& s) { return normal_cdf(cylinder_argument(s, w)); },
                          [&](const ClampedSupSpec& s) {
                              return std::clamp(s.slope * (path_sup(w, s.coord) - s.level), 0.0, 1.0);
                          },
                          [&](const ConstantSpec& s) { return s.value; },
                          [&](const CustomSpec& s) { return s.fn(w); },
                      },
                      spec_);
}

double Functional::sup_bound() const {
    return std::visit(overloaded{
                          [](const ConstantSpec& s) { return std::abs(s.value); },
                          [](const CustomSpec& s) {
                              require(s.sup_bound.has_value(), ErrorKind::Uncertified,
                                      "custom functional '" + s.name + "' has no certified sup bound");
                              return *s.sup_bound;
                          },
                          [](const auto&) { return 1.0; },
                      },
                      spec_);
}

std::optional<double> Functional::lip_bound() const {
    return std::visit(overloaded{
                          [](const SmoothCylinderSpec& s) -> std::optional<double> {
                              double total = 0.0;
                              for (const auto& a : s.weights) total += euclid(a);
                              return total / (s.scale * std::sqrt(2.0 * std::numbers::pi));
                          },
                          [](const ClampedSupSpec& s) -> std::optional<double> { return s.slope; },
                          [](const ConstantSpec&) -> std::optional<double> { return 0.0; },
                          [](const auto&) -> std::optional<double> { return std::nullopt; },
                      },
                      spec_);
}

double Functional::directional_derivative(const PathView& w, const PathView& v) const {
    if (kind() == Kind::Constant) return 0.0;
    const auto* s = as_cylinder();
    require(s != nullptr, ErrorKind::ParameterDomain, "directional derivative is available for smooth cylinders");
    require(w.dim == v.dim && w.dim == s->weights.front().size(), ErrorKind::Shape, "dimension mismatch");
    double dir = 0.0;
    for (std::size_t i = 0; i < s->times.size(); ++i) {
        const auto& a = s->weights[i];
        for (std::size_t c = 0; c < a.size(); ++c) dir += a[c] * v.eval_coord(s->times[i], c);
    }
    return normal_pdf(cylinder_argument(*s, w)) / s->scale * dir;
}

// ---------------------------------------------------------------------------
// Sets

std::string_view to_string(Provenance p) noexcept {
    return p == Provenance::Derived ? "derived" : "user_supplied";
}

SetK::SetK(Functional f, std::optional<double> c) : indicator(std::move(f)), user_constant(c) {
    require(indicator.is_indicator(), ErrorKind::ParameterDomain,
            "sets are given by sup-level or finite-dimensional indicators");
    if (user_constant) {
        require(*user_constant >= 0.0 && std::isfinite(*user_constant), ErrorKind::ParameterDomain,
                "boundary constant must be finite and nonnegative");
    }
}

double boundary_constant(const SetK& K, double horizon) {
    if (K.user_constant) return *K.user_constant;
    require(horizon > 0.0, ErrorKind::ParameterDomain, "T must be positive");
    if (K.indicator.as_sup()) {
        // The Brownian maximum has density ≤ 2/√(2πT); the band has width 2θ.
        return 2.0 * 2.0 / std::sqrt(2.0 * std::numbers::pi * horizon);
    }
    const auto* f = K.indicator.as_finite_dim();
    require(f != nullptr && f->times.size() == 1 && f->times.front() > 0.0, ErrorKind::MissingConstant,
            "boundary constant c_k must be supplied for finite-dimensional sets with k > 1");
    std::size_t active = 0;
    for (const auto& h : f->halfspaces) active += h.a.front() != 0.0 ? 1 : 0;
    return 2.0 * static_cast<double>(active) / std::sqrt(2.0 * std::numbers::pi * f->times.front());
}

Enlargement enlarge(const SetK& K, double theta) {
    require(theta >= 0.0 && std::isfinite(theta), ErrorKind::ParameterDomain,
            "theta must be nonnegative (the inner set is the -theta side)");
    if (theta == 0.0) return {K, K};
    if (const auto* s = K.indicator.as_sup()) {
        return {SetK(Functional::sup_indicator(s->level + theta, s->coord, true), K.user_constant),
                SetK(Functional::sup_indicator(s->level - theta, s->coord, false), K.user_constant)};
    }
    const auto* f = K.indicator.as_finite_dim();
    const double radius = theta * std::sqrt(static_cast<double>(f->times.size()));
    std::vector<Halfspace> outer = f->halfspaces, inner = f->halfspaces;
    for (std::size_t j = 0; j < outer.size(); ++j) {
        const double shift = radius * euclid(outer[j].a);
        outer[j].b += shift;
        inner[j].b -= shift;
    }
    return {SetK(Functional::finite_dim_indicator(f->times, std::move(outer), true), K.user_constant),
            SetK(Functional::finite_dim_indicator(f->times, std::move(inner), false), K.user_constant)};
}

double boundary_enlargement_bound(const SetK& K, double theta, double horizon) {
    require(theta >= 0.0, ErrorKind::ParameterDomain, "theta must be nonnegative");
    if (theta == 0.0) return 0.0;
    return std::min(1.0, boundary_constant(K, horizon) * theta);
}

} // namespace gsmooth
