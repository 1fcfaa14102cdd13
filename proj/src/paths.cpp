#include "gsmooth/paths.hpp"

#include "gsmooth/errors.hpp"

#include <algorithm>
#include <iterator>
#include <array>
#include <cmath>
#include <string>

namespace gsmooth {

namespace {

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Index of the last knot with time <= t (t assumed in [0, T]).
std::size_t knot_at_or_before(std::span<const double> times, double t) {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
}

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Real roots of c0 + c1 u + c2 u^2 + c3 u^3 in (lo, hi), by bisection between
// the stationary points of the cubic.
std::vector<double> cubic_roots_in(std::array<double, 4> c, double lo, double hi) {
    auto f = [&](double u) { return c[0] + u * (c[1] + u * (c[2] + u * c[3])); };
    std::vector<double> cuts{lo, hi};
    // Stationary points: c1 + 2 c2 u + 3 c3 u^2 = 0.
    const double qa = 3.0 * c[3], qb = 2.0 * c[2], qc = c[1];
    if (std::abs(qa) > 0.0) {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double r = std::sqrt(disc);
            cuts.push_back((-qb - r) / (2.0 * qa));
            cuts.push_back((-qb + r) / (2.0 * qa));
        }
    } else if (std::abs(qb) > 0.0) {
        cuts.push_back(-qc / qb);
    }
    std::erase_if(cuts, [&](double u) { return !(u >= lo && u <= hi); });
    sort_unique(cuts);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        double fa = f(a), fb = f(b);
        if (fa == 0.0) {
            roots.push_back(a);
            continue;
        }
        if ((fa < 0.0) == (fb < 0.0)) continue;
        for (int it = 0; it < 200 && b - a > 0.0; ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const double fm = f(m);
            if ((fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    return roots;
}

} // namespace

// ---------------------------------------------------------------------------
// PathView

void PathView::eval_into(double t, std::span<double> out) const {
    const std::size_t m = times.size();
    std::size_t k = 0;
    if (t <= 0.0) {
        k = 0;
    } else if (t >= horizon) {
        k = m - 1;
    } else {
        k = knot_at_or_before(times, t);
        if (mode == Interpolation::Linear && k + 1 < m) {
            const double w = (t - times[k]) / (times[k + 1] - times[k]);
            const auto a = knot(k), b = knot(k + 1);
            for (std::size_t c = 0; c < dim; ++c) out[c] = a[c] + w * (b[c] - a[c]);
            return;
        }
    }
    const auto v = knot(k);
    std::copy(v.begin(), v.end(), out.begin());
}

double PathView::eval_coord(double t, std::size_t coord) const {
    const std::size_t m = times.size();
    if (t <= 0.0) return values[coord];
    if (t >= horizon) return values[(m - 1) * dim + coord];
    const std::size_t k = knot_at_or_before(times, t);
    if (mode == Interpolation::Linear && k + 1 < m) {
        const double w = (t - times[k]) / (times[k + 1] - times[k]);
        const double a = values[k * dim + coord], b = values[(k + 1) * dim + coord];
        return a + w * (b - a);
    }
    return values[k * dim + coord];
}

void PathView::left_limit_into(double t, std::span<double> out) const {
    if (mode == Interpolation::Linear || t <= 0.0 || t > horizon) {
        eval_into(t, out);
        return;
    }
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    const auto v = knot(k);
    std::copy(v.begin(), v.end(), out.begin());
}

// ---------------------------------------------------------------------------
// PiecewisePath

PiecewisePath::PiecewisePath(std::size_t dim, double horizon, std::vector<double> times,
                             std::vector<double> values, Interpolation mode)
    : dim_(dim), horizon_(horizon), times_(std::move(times)), values_(std::move(values)),
      mode_(mode) {
    require(dim_ >= 1, ErrorKind::MalformedPath, "dimension must be positive");
    require(std::isfinite(horizon_) && horizon_ > 0.0, ErrorKind::MalformedPath,
            "horizon must be positive and finite");
    require(!times_.empty(), ErrorKind::MalformedPath, "empty knot list");
    require(values_.size() == times_.size() * dim_, ErrorKind::MalformedPath,
            "expected " + std::to_string(times_.size() * dim_) + " values, got " +
                std::to_string(values_.size()));
    require(times_.front() == 0.0, ErrorKind::MalformedPath, "first knot must be at t = 0");
    for (std::size_t k = 1; k < times_.size(); ++k) {
        require(times_[k] > times_[k - 1], ErrorKind::MalformedPath,
                "knot times must be strictly increasing");
    }
    require(times_.back() <= horizon_, ErrorKind::MalformedPath, "knot beyond the horizon");
    for (double v : values_) require(std::isfinite(v), ErrorKind::MalformedPath, "non-finite value");
}

PiecewisePath PiecewisePath::constant(std::span<const double> value, double horizon) {
    return PiecewisePath(value.size(), horizon, {0.0}, std::vector<double>(value.begin(), value.end()),
                         Interpolation::Step);
}

PiecewisePath PiecewisePath::constant(double value, double horizon) {
    return PiecewisePath(1, horizon, {0.0}, {value}, Interpolation::Step);
}

PiecewisePath PiecewisePath::scalar(std::vector<double> times, std::vector<double> values,
                                    double horizon, Interpolation mode) {
    return PiecewisePath(1, horizon, std::move(times), std::move(values), mode);
}

PiecewisePath PiecewisePath::indicator(double r, double horizon, std::span<const double> x) {
    const std::size_t d = x.size();
    if (r <= 0.0) return constant(x, horizon);
    std::vector<double> values(d, 0.0);
    if (r > horizon) return PiecewisePath(d, horizon, {0.0}, values, Interpolation::Step);
    values.insert(values.end(), x.begin(), x.end());
    return PiecewisePath(d, horizon, {0.0, r}, std::move(values), Interpolation::Step);
}

PiecewisePath PiecewisePath::indicator(double r, double horizon, double x) {
    return indicator(r, horizon, std::span<const double>(&x, 1));
}

PiecewisePath PiecewisePath::indicator_difference(double s, double t, double horizon,
                                                  std::span<const double> x) {
    const std::size_t d = x.size();
    std::vector<double> times{0.0};
    std::vector<double> values(d, 0.0);
    const double lo = std::max(s, 0.0);
    const double hi = std::min(t, horizon);
    if (hi <= lo) return PiecewisePath(d, horizon, times, values, Interpolation::Step);
    if (lo > 0.0) {
        times.push_back(lo);
        values.insert(values.end(), x.begin(), x.end());
    } else {
        std::copy(x.begin(), x.end(), values.begin());
    }
    if (hi < horizon) {
        times.push_back(hi);
        values.insert(values.end(), d, 0.0);
    }
    return PiecewisePath(d, horizon, std::move(times), std::move(values), Interpolation::Step);
}

PiecewisePath PiecewisePath::indicator_difference(double s, double t, double horizon, double x) {
    return indicator_difference(s, t, horizon, std::span<const double>(&x, 1));
}

std::vector<double> PiecewisePath::eval(double t) const {
    std::vector<double> out(dim_);
    eval_into(t, out);
    return out;
}

PiecewisePath PiecewisePath::combine(double a, const PiecewisePath& other, double b) const {
    require(other.dim_ == dim_ && other.mode_ == mode_ && other.horizon_ == horizon_,
            ErrorKind::Shape, "combined paths must share dimension, mode and horizon");
    std::vector<double> times = times_;
    times.insert(times.end(), other.times_.begin(), other.times_.end());
    sort_unique(times);
    std::vector<double> values(times.size() * dim_);
    std::vector<double> u(dim_), v(dim_);
    for (std::size_t k = 0; k < times.size(); ++k) {
        eval_into(times[k], u);
        other.eval_into(times[k], v);
        for (std::size_t c = 0; c < dim_; ++c) values[k * dim_ + c] = a * u[c] + b * v[c];
    }
    return PiecewisePath(dim_, horizon_, std::move(times), std::move(values), mode_);
}

PiecewisePath PiecewisePath::scaled(double a) const {
    std::vector<double> values = values_;
    for (double& v : values) v *= a;
    return PiecewisePath(dim_, horizon_, times_, std::move(values), mode_);
}

// ---------------------------------------------------------------------------
// Norms, moduli, jumps

double sup_norm(const PathView& path) {
    double best = 0.0;
    for (std::size_t k = 0; k < path.knot_count(); ++k) best = std::max(best, norm(path.knot(k)));
    return best;
}

double sup_norm(const PiecewisePath& path) { return sup_norm(path.view()); }

double modulus_of_continuity(const PiecewisePath& path, double eta) {
    require(eta > 0.0, ErrorKind::ParameterDomain, "modulus window must be positive");
    const auto& t = path.times();
    const std::size_t m = t.size();
    double best = 0.0;
    if (path.mode() == Interpolation::Step) {
        // Segment i holds on [t_i, e_i); a value pair (i, j) is reachable with
        // t - s < eta iff t_j - e_i < eta.
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double end_i = t[i + 1];
            for (std::size_t j = i + 1; j < m && t[j] - end_i < eta; ++j) {
                best = std::max(best, distance(path.knot(i), path.knot(j)));
            }
        }
        return best;
    }
    // Linear mode: |x(t) - x(s)| is convex on each cell of the knot grid
    // intersected with {t - s <= eta}; the maximum sits at a polygon vertex.
    std::vector<double> times = t;
    if (times.back() < path.horizon()) times.push_back(path.horizon());
    const std::size_t n = times.size();
    const std::size_t d = path.dim();
    std::vector<double> a(d), b(d);
    for (std::size_t i = 0; i < n; ++i) {
        path.eval_into(times[i], a);
        for (std::size_t j = i + 1; j < n && times[j] - times[i] <= eta; ++j) {
            path.eval_into(times[j], b);
            best = std::max(best, distance(a, b));
        }
        if (times[i] + eta <= path.horizon()) {
            path.eval_into(times[i] + eta, b);
            best = std::max(best, distance(a, b));
        }
        if (times[i] - eta >= 0.0) {
            path.eval_into(times[i] - eta, b);
            best = std::max(best, distance(a, b));
        }
    }
    return best;
}

double max_jump(const PiecewisePath& path) {
    if (path.mode() == Interpolation::Linear) return 0.0;
    double best = 0.0;
    for (std::size_t k = 1; k < path.knot_count(); ++k) {
        best = std::max(best, distance(path.knot(k - 1), path.knot(k)));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Regularization

RegularizedPath::RegularizedPath(PiecewisePath source, double epsilon)
    : source_(std::move(source)), epsilon_(epsilon) {
    require(std::isfinite(epsilon) && epsilon > 0.0, ErrorKind::ParameterDomain,
            "epsilon must be positive");
    const std::size_t d = source_.dim();
    const std::size_t m = source_.knot_count();
    const auto& t = source_.times();
    cumulative_.assign(m * d, 0.0);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const double len = t[k + 1] - t[k];
        const auto v0 = source_.knot(k), v1 = source_.knot(k + 1);
        for (std::size_t c = 0; c < d; ++c) {
            const double area = source_.mode() == Interpolation::Step ? v0[c] * len
                                                                      : 0.5 * (v0[c] + v1[c]) * len;
            cumulative_[(k + 1) * d + c] = cumulative_[k * d + c] + area;
        }
    }
}

void RegularizedPath::integral_into(double u, std::span<double> out) const {
    if (u <= 0.0) {
        const auto v0 = source_.knot(0);
        for (std::size_t c = 0; c < source_.dim(); ++c) out[c] = u * v0[c];
        return;
    }
    integral_at(u, knot_at_or_before(source_.times(), std::min(u, source_.horizon())), out);
}

void RegularizedPath::integral_at(double u, std::size_t k, std::span<double> out) const {
    const std::size_t d = source_.dim();
    const std::size_t m = source_.knot_count();
    const auto& t = source_.times();
    const double T = source_.horizon();
    const double uc = std::min(u, T);
    const double h = uc - t[k];
    const auto vk = source_.knot(k);
    const bool linear = source_.mode() == Interpolation::Linear && k + 1 < m;
    for (std::size_t c = 0; c < d; ++c) {
        double acc = cumulative_[k * d + c] + vk[c] * h;
        if (linear) {
            const double len = t[k + 1] - t[k];
            acc += (source_.knot(k + 1)[c] - vk[c]) * h * h / (2.0 * len);
        }
        out[c] = acc;
    }
    if (u > T) {
        const auto vT = source_.knot(m - 1);
        for (std::size_t c = 0; c < d; ++c) out[c] += (u - T) * vT[c];
    }
}

void RegularizedPath::value_into(double s, std::span<double> out) const {
    const std::size_t d = source_.dim();
    std::array<double, 8> buf{};
    std::vector<double> heap;
    double* lo = buf.data();
    if (d > 4) {
        heap.resize(2 * d);
        lo = heap.data();
    }
    std::span<double> lower(lo, d);
    integral_into(s - epsilon_, lower);
    integral_into(s + epsilon_, out);
    const double inv = 1.0 / (2.0 * epsilon_);
    for (std::size_t c = 0; c < d; ++c) out[c] = (out[c] - lower[c]) * inv;
}

std::vector<double> RegularizedPath::value(double s) const {
    std::vector<double> out(source_.dim());
    value_into(s, out);
    return out;
}

void RegularizedPath::gradient_into(double s, std::span<double> out) const {
    const std::size_t d = source_.dim();
    std::vector<double> lower(d);
    source_.eval_into(s - epsilon_, lower);
    source_.eval_into(s + epsilon_, out);
    const double inv = 1.0 / (2.0 * epsilon_);
    for (std::size_t c = 0; c < d; ++c) out[c] = (out[c] - lower[c]) * inv;
}

std::vector<double> RegularizedPath::gradient(double s) const {
    std::vector<double> out(source_.dim());
    gradient_into(s, out);
    return out;
}

std::vector<double> RegularizedPath::breakpoints() const {
    const double T = source_.horizon();
    const auto& t = source_.times();
    // Three sorted shifts of the knots, merged.
    std::vector<double> a, b, ab;
    a.reserve(t.size() + 2);
    b.reserve(t.size());
    a.push_back(0.0);
    for (double x : t) {
        if (x - epsilon_ >= 0.0) a.push_back(x - epsilon_);
        if (x + epsilon_ <= T) b.push_back(x + epsilon_);
    }
    a.push_back(T);
    std::sort(a.begin(), a.end()); // 0 and T may be out of place
    ab.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ab));
    std::vector<double> pts;
    pts.reserve(ab.size() + t.size());
    std::merge(ab.begin(), ab.end(), t.begin(), t.end(), std::back_inserter(pts));
    pts.erase(std::remove_if(pts.begin(), pts.end(), [T](double p) { return p < 0.0 || p > T; }), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double RegularizedPath::sup_gradient() const {
    const auto pts = breakpoints();
    std::vector<double> g(source_.dim());
    double best = 0.0;
    auto consider = [&](double s) {
        gradient_into(s, g);
        best = std::max(best, norm(g));
    };
    if (source_.mode() == Interpolation::Step) {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) consider(0.5 * (pts[i] + pts[i + 1]));
        consider(pts.back());
    } else {
        for (double s : pts) consider(s);
    }
    return best;
}

namespace {

/// Forward-only knot lookup for nondecreasing query times.
struct KnotCursor {
    const std::vector<double>& t;
    std::size_t k = 0;

    /// Last knot at or before u.
    std::size_t at(double u) {
        while (k + 1 < t.size() && t[k + 1] <= u) ++k;
        return k;
    }
};

} // namespace

double RegularizedPath::sup_difference() const {
    const auto pts = breakpoints();
    const std::size_t d = source_.dim();
    const auto& t = source_.times();
    const double T = source_.horizon();
    const double inv = 1.0 / (2.0 * epsilon_);
    std::vector<double> lower(d), upper(d), raw(d), diff(d);
    KnotCursor lo{t}, hi{t}, mid{t};
    auto integral = [&](double u, KnotCursor& cur, std::span<double> out) {
        if (u <= 0.0) {
            const auto v0 = source_.knot(0);
            for (std::size_t c = 0; c < d; ++c) out[c] = u * v0[c];
        } else {
            integral_at(u, cur.at(std::min(u, T)), out);
        }
    };
    // w_ε(s) - w(s), or with the left limit of w at s; queries must be nondecreasing in s.
    auto diff_into = [&](double s, bool left, std::span<double> out) {
        integral(s - epsilon_, lo, lower);
        integral(s + epsilon_, hi, upper);
        std::size_t k = mid.at(s);
        if (left && k > 0 && t[k] == s) --k;
        const auto vk = source_.knot(k);
        if (source_.mode() == Interpolation::Linear && k + 1 < t.size()) {
            const double w = (s - t[k]) / (t[k + 1] - t[k]);
            const auto v1 = source_.knot(k + 1);
            for (std::size_t c = 0; c < d; ++c) raw[c] = vk[c] + w * (v1[c] - vk[c]);
        } else {
            for (std::size_t c = 0; c < d; ++c) raw[c] = vk[c];
        }
        for (std::size_t c = 0; c < d; ++c) out[c] = (upper[c] - lower[c]) * inv - raw[c];
    };
    double best = 0.0;
    if (source_.mode() == Interpolation::Step) {
        // Difference is affine on each [a, b); check a and the left limit at b.
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            diff_into(pts[i], false, diff);
            best = std::max(best, norm(diff));
            diff_into(pts[i + 1], true, diff);
            best = std::max(best, norm(diff));
        }
        diff_into(pts.back(), false, diff);
        return std::max(best, norm(diff));
    }
    // Linear source: the difference is quadratic per piece; maximize its norm
    // over endpoints and the stationary points of |g|^2. Interior probes run
    // on fresh cursors so the sweep stays monotone.
    std::vector<double> g0(d), g1(d), g2(d);
    diff_into(pts.front(), false, g0);
    best = norm(g0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        const double len = b - a;
        diff_into(0.5 * (a + b), false, g1);
        diff_into(b, false, g2);
        best = std::max(best, norm(g2));
        if (len > 0.0) {
            std::array<double, 4> cubic{};
            double B1 = 0.0, C1 = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double A = g0[c];
                const double B = (-3.0 * g0[c] + 4.0 * g1[c] - g2[c]) / len;
                const double C = 2.0 * (g0[c] - 2.0 * g1[c] + g2[c]) / (len * len);
                cubic[0] += A * B;
                cubic[1] += B * B + 2.0 * A * C;
                cubic[2] += 3.0 * B * C;
                cubic[3] += 2.0 * C * C;
                B1 = B;
                C1 = C;
            }
            auto probe = [&](double u) {
                // g(u) = A + B u + C u², evaluated from the fitted coefficients.
                double acc = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    const double A = g0[c];
                    const double B = (-3.0 * g0[c] + 4.0 * g1[c] - g2[c]) / len;
                    const double C = 2.0 * (g0[c] - 2.0 * g1[c] + g2[c]) / (len * len);
                    const double v = A + u * (B + u * C);
                    acc += v * v;
                }
                best = std::max(best, std::sqrt(acc));
            };
            if (d == 1) {
                // |g| peaks at an endpoint or at the vertex of the parabola.
                if (C1 != 0.0) {
                    const double u = -B1 / (2.0 * C1);
                    if (u > 0.0 && u < len) probe(u);
                }
            } else {
                for (double u : cubic_roots_in(cubic, 0.0, len)) probe(u);
            }
        }
        std::swap(g0, g2);
    }
    return best;
}

double RegularizedPath::gradient_energy() const { return grad_inner(source_, source_, epsilon_); }

RegularizedPath regularize(const PiecewisePath& path, double epsilon) {
    return RegularizedPath(path, epsilon);
}

double grad_inner(const PiecewisePath& x, const PiecewisePath& y, double epsilon) {
    require(std::isfinite(epsilon) && epsilon > 0.0, ErrorKind::ParameterDomain,
            "epsilon must be positive");
    require(x.dim() == y.dim() && x.horizon() == y.horizon(), ErrorKind::Shape,
            "directions must share dimension and horizon");
    const RegularizedPath rx(x, epsilon);
    const RegularizedPath ry(y, epsilon);
    std::vector<double> pts = rx.breakpoints();
    const auto more = ry.breakpoints();
    pts.insert(pts.end(), more.begin(), more.end());
    sort_unique(pts);
    const std::size_t d = x.dim();
    std::vector<double> gx(d), gy(d);
    auto inner_at = [&](double s) {
        rx.gradient_into(s, gx);
        ry.gradient_into(s, gy);
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) acc += gx[c] * gy[c];
        return acc;
    };
    // With a step source one gradient is constant per piece and the product
    // is at most affine, so the midpoint rule is exact; two linear sources give
    // a quadratic integrand, integrated exactly by Simpson's rule.
    const bool midpoint = x.mode() == Interpolation::Step || y.mode() == Interpolation::Step;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        const double len = b - a;
        const double mid = 0.5 * (a + b);
        if (midpoint) {
            total += len * inner_at(mid);
        } else {
            total += len / 6.0 * (inner_at(a) + 4.0 * inner_at(mid) + inner_at(b));
        }
    }
    return total;
}

double grad_energy(const PiecewisePath& direction, double epsilon) {
    return grad_inner(direction, direction, epsilon);
}

double indicator_difference_energy(double s, double t, double x2_norm, double epsilon) {
    require(epsilon > 0.0, ErrorKind::ParameterDomain, "epsilon must be positive");
    if (t <= s) return 0.0;
    return x2_norm * x2_norm * std::min(2.0 * epsilon, t - s) / (2.0 * epsilon * epsilon);
}

} // namespace gsmooth
