#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gsmooth {

enum class Interpolation { Step, Linear };

/// Non-owning view of a d-dimensional path on [0, T]. Values are stored
/// knot-major: knot k occupies values[k*dim, (k+1)*dim).
///
/// Step mode is right-continuous; linear mode interpolates between knots.
/// After the last knot the path is constant up to T. Outside [0, T] the path
/// is extended by its values at 0 and T.
struct PathView {
    std::span<const double> times;
    std::span<const double> values;
    std::size_t dim = 1;
    double horizon = 1.0;
    Interpolation mode = Interpolation::Step;

    std::size_t knot_count() const noexcept { return times.size(); }
    std::span<const double> knot(std::size_t k) const noexcept { return values.subspan(k * dim, dim); }

    void eval_into(double t, std::span<double> out) const;
    double eval_coord(double t, std::size_t coord) const;
    /// Left limit w(t-); equals eval for t <= 0 and in linear mode.
    void left_limit_into(double t, std::span<double> out) const;
};

/// d-dimensional càdlàg path given by finitely many knots
/// 0 = t_0 < t_1 < ... < t_m <= T with step or linear interpolation.
class PiecewisePath {
public:
    PiecewisePath(std::size_t dim, double horizon, std::vector<double> times,
                  std::vector<double> values, Interpolation mode);

    static PiecewisePath constant(std::span<const double> value, double horizon);
    static PiecewisePath constant(double value, double horizon);
    /// Scalar path from parallel knot/value lists.
    static PiecewisePath scalar(std::vector<double> times, std::vector<double> values,
                                double horizon, Interpolation mode);
    /// x * I_r, with I_r(u) = 1[u >= r].
    static PiecewisePath indicator(double r, double horizon, std::span<const double> x);
    static PiecewisePath indicator(double r, double horizon, double x = 1.0);
    /// x * (I_s - I_t) = x * 1[s <= u < t].
    static PiecewisePath indicator_difference(double s, double t, double horizon,
                                              std::span<const double> x);
    static PiecewisePath indicator_difference(double s, double t, double horizon, double x = 1.0);

    std::size_t dim() const noexcept { return dim_; }
    double horizon() const noexcept { return horizon_; }
    Interpolation mode() const noexcept { return mode_; }
    std::size_t knot_count() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> knot(std::size_t k) const noexcept {
        return std::span<const double>(values_).subspan(k * dim_, dim_);
    }

    PathView view() const noexcept {
        return PathView{times_, values_, dim_, horizon_, mode_};
    }

    std::vector<double> eval(double t) const;
    void eval_into(double t, std::span<double> out) const { view().eval_into(t, out); }
    double eval_coord(double t, std::size_t coord = 0) const { return view().eval_coord(t, coord); }

    /// a*this + b*other on the union of knots; both paths must share mode,
    /// dimension and horizon.
    PiecewisePath combine(double a, const PiecewisePath& other, double b) const;
    PiecewisePath scaled(double a) const;

private:
    std::size_t dim_;
    double horizon_;
    std::vector<double> times_;
    std::vector<double> values_;
    Interpolation mode_;
};

double sup_norm(const PiecewisePath& path);
double sup_norm(const PathView& path);

/// ω(η) = sup{|w(t) - w(s)| : 0 <= s < t <= T, t - s < η}, computed exactly.
double modulus_of_continuity(const PiecewisePath& path, double eta);

/// Largest |w(t) - w(t-)|; zero in linear mode.
double max_jump(const PiecewisePath& path);

/// The ε-regularized path w_ε(s) = (1/2ε) ∫_{s-ε}^{s+ε} w(u) du, evaluated
/// exactly through the cumulative integral of the source.
class RegularizedPath {
public:
    RegularizedPath(PiecewisePath source, double epsilon);

    const PiecewisePath& source() const noexcept { return source_; }
    double epsilon() const noexcept { return epsilon_; }
    std::size_t dim() const noexcept { return source_.dim(); }

    void value_into(double s, std::span<double> out) const;
    std::vector<double> value(double s) const;

    /// (w(s+ε) - w(s-ε)) / 2ε with w right-continuous.
    void gradient_into(double s, std::span<double> out) const;
    std::vector<double> gradient(double s) const;

    /// Points of [0, T] where w_ε or its gradient may change polynomial piece:
    /// {0, T} and the source knots shifted by -ε, 0, +ε.
    std::vector<double> breakpoints() const;

    double sup_gradient() const;
    /// ‖w_ε - w‖ over [0, T], including left limits of w.
    double sup_difference() const;
    /// ∫_0^T |∇w_ε(u)|² du.
    double gradient_energy() const;

private:
    void integral_into(double u, std::span<double> out) const;
    /// As integral_into with k the last knot at or before min(u, T); u > 0.
    void integral_at(double u, std::size_t k, std::span<double> out) const;

    PiecewisePath source_;
    double epsilon_;
    std::vector<double> cumulative_; // ∫_0^{t_k} w, knot-major
};

RegularizedPath regularize(const PiecewisePath& path, double epsilon);

/// ∫_0^T |∇x_ε(u)|² du; zero-width directions give 0.
double grad_energy(const PiecewisePath& direction, double epsilon);

/// ∫_0^T <∇x_ε(u), ∇y_ε(u)> du, exact for step and linear sources.
double grad_inner(const PiecewisePath& x, const PiecewisePath& y, double epsilon);

/// Interior closed form for x = x2 (I_s - I_t):  |x2|² min(2ε, t-s) / (2ε²).
double indicator_difference_energy(double s, double t, double x2_norm, double epsilon);

} // namespace gsmooth
