#include "gsmooth/bounds.hpp"

#include "gsmooth/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <tuple>

namespace gsmooth {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(std::int64_t n, std::int64_t d) {
    require(d != 0, ErrorKind::ParameterDomain, "zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num = g == 0 ? 0 : n / g;
    den = g == 0 ? 1 : d / g;
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------------------
// Expectation envelopes and κ defaults

double mean_from_tail(const TailEnvelope& tail, double epsilon) {
    auto raw = [&](double u) { return tail.unclamped(epsilon, u); };
    // Smallest grid point beyond which the raw tail is at most one.
    double hi = 1.0;
    while (raw(hi) > 1.0) {
        hi *= 2.0;
        require(hi < 1e12, ErrorKind::DivergentEnvelope, "tail envelope never drops below 1");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (raw(mid) > 1.0) lo = mid;
        else hi = mid;
    }
    if (raw(hi) == 0.0) return hi;
    boost::math::quadrature::exp_sinh<double> integrator;
    double error = 0.0;
    const double integral = integrator.integrate([&](double u) { return raw(u); }, hi, kInf,
                                                 std::sqrt(std::numeric_limits<double>::epsilon()), &error);
    require(std::isfinite(integral) && std::isfinite(error), ErrorKind::DivergentEnvelope,
            "tail envelope is not integrable");
    return hi + integral + error;
}

MeanEnvelope mean_envelope_from_tail(TailEnvelope tail) {
    return [tail = std::move(tail)](double eps) { return mean_from_tail(tail, eps); };
}

double order_only_kappa(double c, double horizon, double n) {
    require(c >= 0.0 && horizon > 0.0 && n >= 1.0, ErrorKind::ParameterDomain, "need c >= 0, T > 0, n >= 1");
    return c * horizon / std::sqrt(n);
}

// ---------------------------------------------------------------------------
// Assembled bounds

namespace {

void check_inputs(const TheoremInputs& in) {
    require(in.kappa1 >= 0.0 && in.kappa2 >= 0.0, ErrorKind::ParameterDomain, "kappas must be nonnegative");
    require(in.horizon >= 1.0, ErrorKind::ParameterDomain, "horizon must be >= 1");
    require(in.dim >= 1, ErrorKind::ParameterDomain, "dimension must be positive");
}

void check_point(double epsilon, double delta, double theta, double gamma) {
    require(epsilon > 0.0 && delta > 0.0 && theta > 0.0 && gamma > 0.0, ErrorKind::ParameterDomain,
            "epsilon, delta, theta and gamma must be positive");
}

double bm_term(const TheoremInputs& in, double delta, double gamma) {
    const double d = static_cast<double>(in.dim);
    return 4.0 * d * std::exp(-gamma * gamma / (2.0 * d * in.horizon * delta * delta));
}

} // namespace

BoundBreakdown theorem_bound(const TheoremInputs& in, double epsilon, double delta, double theta, double gamma) {
    check_inputs(in);
    check_point(epsilon, delta, theta, gamma);
    require(in.set.has_value(), ErrorKind::MissingInput, "indicator bound needs a set K");
    BoundBreakdown b;
    b.epsilon = epsilon;
    b.delta = delta;
    b.theta = theta;
    b.gamma = gamma;
    const double u = 1.0 / (epsilon * delta);
    b.stein = c_eps_delta_T(epsilon, delta, in.horizon) * in.kappa1;
    b.smoothness = std::sqrt(in.horizon) * u * u * in.kappa2;
    b.x_tail = in.x_tail(epsilon, theta);
    b.z_tail = in.z_tail(epsilon, theta);
    b.bm = bm_term(in, delta, gamma);
    b.boundary = boundary_enlargement_bound(*in.set, 2.0 * (theta + gamma), in.horizon);
    b.total = b.stein + b.smoothness + b.x_tail + b.z_tail + b.bm + b.boundary;
    b.objective = b.total;
    return b;
}

double lp_bound(const TheoremInputs& in, double epsilon, double delta, double theta, double gamma) {
    check_inputs(in);
    check_point(epsilon, delta, theta, gamma);
    const double u = 1.0 / (epsilon * delta);
    const double sum = c_eps_delta_T(epsilon, delta, in.horizon) * in.kappa1 +
                       std::sqrt(in.horizon) * u * u * in.kappa2 + in.x_tail(epsilon, theta) +
                       in.z_tail(epsilon, theta) + bm_term(in, delta, gamma);
    return std::max(2.0 * (theta + gamma), sum);
}

BoundBreakdown lipschitz_breakdown(const TheoremInputs& in, double epsilon, double delta) {
    check_inputs(in);
    require(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0, ErrorKind::ParameterDomain,
            "epsilon and delta must lie in (0, 1)");
    require(static_cast<bool>(in.x_mean) && static_cast<bool>(in.z_mean), ErrorKind::MissingInput,
            "Lipschitz bound needs expectation envelopes for X and Z");
    require(in.bm_sup_mean.has_value(), ErrorKind::MissingInput, "Lipschitz bound needs E‖B‖ over [0,1]");
    BoundBreakdown b;
    b.epsilon = epsilon;
    b.delta = delta;
    b.x_tail = in.x_mean(epsilon);
    b.z_tail = in.z_mean(epsilon);
    b.bm = 2.0 * std::sqrt(in.horizon) * delta * *in.bm_sup_mean;
    b.stein = 6.0 * in.horizon / (epsilon * epsilon * epsilon * delta * delta) * in.kappa1;
    b.smoothness = in.kappa2 / (std::sqrt(std::numbers::pi) * epsilon * epsilon * delta);
    b.total = b.x_tail + b.z_tail + b.bm + b.stein + b.smoothness;
    b.objective = b.total;
    return b;
}

double lipschitz_bound(const TheoremInputs& in, double epsilon, double delta) {
    return lipschitz_breakdown(in, epsilon, delta).total;
}

// ---------------------------------------------------------------------------
// Optimizer

std::string_view to_string(Objective o) noexcept {
    switch (o) {
    case Objective::Indicator: return "indicator";
    case Objective::LevyProkhorov: return "lp";
    case Objective::Lipschitz: return "lipschitz";
    }
    return "unknown";
}

BoundBreakdown evaluate_objective(const TheoremInputs& in, Objective objective, double epsilon, double delta,
                                  double theta, double gamma) {
    switch (objective) {
    case Objective::Indicator: return theorem_bound(in, epsilon, delta, theta, gamma);
    case Objective::LevyProkhorov: {
        BoundBreakdown b;
        if (in.set) {
            b = theorem_bound(in, epsilon, delta, theta, gamma);
        } else {
            b.epsilon = epsilon;
            b.delta = delta;
            b.theta = theta;
            b.gamma = gamma;
        }
        b.objective = lp_bound(in, epsilon, delta, theta, gamma);
        return b;
    }
    case Objective::Lipschitz: return lipschitz_breakdown(in, epsilon, delta);
    }
    fail(ErrorKind::ParameterDomain, "unknown objective");
}

namespace {

struct Axis {
    double lo, hi;
};

std::vector<double> log_points(const Axis& a, int level) {
    const std::size_t count = (std::size_t{1} << level) + 1;
    std::vector<double> out(count);
    if (a.lo == a.hi) {
        std::fill(out.begin(), out.end(), a.lo);
        return out;
    }
    const double llo = std::log(a.lo), lhi = std::log(a.hi);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    out.front() = a.lo;
    out.back() = a.hi;
    return out;
}

bool better(const BoundBreakdown& a, const BoundBreakdown& b) {
    return std::tie(a.objective, a.epsilon, a.delta, a.theta, a.gamma) <
           std::tie(b.objective, b.epsilon, b.delta, b.theta, b.gamma);
}

double shrink_low(double lo, double bound) { return lo > bound ? lo : bound + std::max(1e-12, 1e-9 * bound); }

} // namespace

OptimizeResult optimize_bound(const TheoremInputs& in, Objective objective, const SearchBox& box,
                              const OptimizeOptions& options) {
    check_inputs(in);
    require(options.budget >= 4 && options.budget <= 8, ErrorKind::ParameterDomain, "budget level must lie in [4, 8]");
    require(options.rounds >= 0, ErrorKind::ParameterDomain, "rounds must be nonnegative");
    OptimizeResult result;
    SearchBox b = box;
    const bool lipschitz = objective == Objective::Lipschitz;
    // Intersect the ε range with every envelope's validity.
    for (const TailEnvelope* env : {&in.x_tail, &in.z_tail}) {
        if (lipschitz) break;
        b.eps_lo = shrink_low(b.eps_lo, env->eps_min);
        if (env->eps_max_inclusive) b.eps_hi = std::min(b.eps_hi, env->eps_max);
        else if (b.eps_hi >= env->eps_max) b.eps_hi = env->eps_max * (1.0 - 1e-9);
    }
    if (lipschitz) {
        b.eps_hi = std::min(b.eps_hi, 1.0 - 1e-9);
        b.delta_hi = std::min(b.delta_hi, 1.0 - 1e-9);
    }
    for (double v : {b.eps_lo, b.delta_lo, b.theta_lo, b.gamma_lo}) {
        require(v > 0.0 && std::isfinite(v), ErrorKind::Infeasible, "search box lower ends must be positive");
    }
    require(b.eps_lo <= b.eps_hi && b.delta_lo <= b.delta_hi && b.theta_lo <= b.theta_hi && b.gamma_lo <= b.gamma_hi,
            ErrorKind::Infeasible, "search box is empty after intersecting with envelope validity");
    result.box = b;

    std::vector<Axis> axes{{b.eps_lo, b.eps_hi}, {b.delta_lo, b.delta_hi}};
    if (!lipschitz) {
        axes.push_back({b.theta_lo, b.theta_hi});
        axes.push_back({b.gamma_lo, b.gamma_hi});
    }
    const std::size_t dims = axes.size();

    auto eval = [&](const std::array<double, 4>& x) {
        BoundBreakdown r;
        try {
            r = evaluate_objective(in, objective, x[0], x[1], lipschitz ? 0.0 : x[2], lipschitz ? 0.0 : x[3]);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ParameterDomain && e.kind() != ErrorKind::DivergentEnvelope) throw;
            r.epsilon = x[0];
            r.delta = x[1];
            r.theta = lipschitz ? 0.0 : x[2];
            r.gamma = lipschitz ? 0.0 : x[3];
            r.objective = kInf;
            r.total = kInf;
        }
        if (!std::isfinite(r.objective)) r.objective = kInf;
        return r;
    };
    auto record = [&](const std::string& stage, const BoundBreakdown& r) {
        result.trace.push_back({stage, r.epsilon, r.delta, r.theta, r.gamma, r.objective});
    };

    BoundBreakdown overall;
    overall.objective = kInf;
    bool have = false;
    auto offer = [&](const BoundBreakdown& r) {
        if (!have || better(r, overall)) {
            overall = r;
            have = true;
        }
    };

    for (const auto& c : options.extra_candidates) {
        const bool inside = c.epsilon >= b.eps_lo && c.epsilon <= b.eps_hi && c.delta >= b.delta_lo &&
                            c.delta <= b.delta_hi &&
                            (lipschitz || (c.theta >= b.theta_lo && c.theta <= b.theta_hi && c.gamma >= b.gamma_lo &&
                                           c.gamma <= b.gamma_hi));
        if (!inside) continue;
        const auto r = eval({c.epsilon, c.delta, c.theta, c.gamma});
        record("candidate", r);
        offer(r);
    }

    for (int level = 4; level <= options.budget; ++level) {
        std::vector<std::vector<double>> pts(dims);
        for (std::size_t a = 0; a < dims; ++a) pts[a] = log_points(axes[a], level);
        std::size_t total = 1;
        for (const auto& p : pts) total *= p.size();
        std::vector<BoundBreakdown> values(total);
        parallel_for(total, options.workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t idx = begin; idx < end; ++idx) {
                std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};
                std::size_t rem = idx;
                for (std::size_t a = dims; a-- > 0;) {
                    x[a] = pts[a][rem % pts[a].size()];
                    rem /= pts[a].size();
                }
                values[idx] = eval(x);
            }
        });
        const std::string stage = "grid" + std::to_string(level);
        BoundBreakdown best = values.front();
        for (const auto& v : values) {
            record(stage, v);
            if (better(v, best)) best = v;
        }

        // Coordinate descent with golden-section search in log space.
        const std::string refine = "refine" + std::to_string(level);
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int round = 0; round < options.rounds; ++round) {
            for (std::size_t a = 0; a < dims; ++a) {
                if (axes[a].lo == axes[a].hi) continue;
                std::array<double, 4> x{best.epsilon, best.delta, best.theta, best.gamma};
                // Bracket: one grid cell either side of the incumbent.
                const double step = (std::log(axes[a].hi) - std::log(axes[a].lo)) /
                                    static_cast<double>(pts[a].size() - 1);
                double lo = std::max(std::log(axes[a].lo), std::log(x[a]) - step);
                double hi = std::min(std::log(axes[a].hi), std::log(x[a]) + step);
                auto at = [&](double lx) {
                    auto y = x;
                    y[a] = std::clamp(std::exp(lx), axes[a].lo, axes[a].hi);
                    const auto r = eval(y);
                    record(refine, r);
                    if (better(r, best)) best = r;
                    return r.objective;
                };
                double c = hi - invphi * (hi - lo);
                double d = lo + invphi * (hi - lo);
                double fc = at(c), fd = at(d);
                for (int it = 0; it < 30; ++it) {
                    if (fc <= fd) {
                        hi = d;
                        d = c;
                        fd = fc;
                        c = hi - invphi * (hi - lo);
                        fc = at(c);
                    } else {
                        lo = c;
                        c = d;
                        fc = fd;
                        d = lo + invphi * (hi - lo);
                        fd = at(d);
                    }
                }
            }
        }
        offer(best);
    }
    require(std::isfinite(overall.objective), ErrorKind::Infeasible, "no feasible parameter point found");
    result.best = overall;
    return result;
}

// ---------------------------------------------------------------------------
// Closed-form rates

Rational indicator_rate_exponent(std::int64_t p) {
    require(p >= 3, ErrorKind::UnsupportedMoment, "rates need p >= 3");
    return Rational(p - 2, 20 * p - 4);
}

Rational lipschitz_rate_exponent(std::int64_t p) {
    require(p >= 3, ErrorKind::UnsupportedMoment, "rates need p >= 3");
    return Rational(p - 2, 18 * p - 12);
}

RateParams example_rate_params(double p, double horizon, double n) {
    require(p >= 3.0, ErrorKind::UnsupportedMoment, "rates need p >= 3");
    require(horizon >= 1.0 && n >= 2.0, ErrorKind::ParameterDomain, "rates need T >= 1 and n >= 2");
    const double base = std::pow(horizon, 4.0) / std::sqrt(n);
    const double root = 1.0 / (5.0 * p - 1.0);
    RateParams r;
    r.epsilon = std::pow(std::pow(base, p + 1.0) * std::pow(horizon, -4.0), root);
    r.theta = std::pow(std::pow(base, p / 2.0 - 1.0) * std::pow(horizon, 3.0), root);
    r.delta = r.theta / std::sqrt(horizon);
    r.gamma = r.delta * std::sqrt(10.0 * horizon * std::log(n));
    r.rate = std::sqrt(std::log(n)) * r.theta;
    if (p == std::floor(p) && horizon == 1.0) r.exponent = indicator_rate_exponent(static_cast<std::int64_t>(p));
    r.exponent_limit = Rational(1, 20);
    return r;
}

RateParams example_lipschitz_params(double p, double n) {
    require(p >= 3.0, ErrorKind::UnsupportedMoment, "rates need p >= 3");
    require(n >= 2.0, ErrorKind::ParameterDomain, "rates need n >= 2");
    RateParams r;
    r.epsilon = std::pow(n, -p / (3.0 * (3.0 * p - 2.0)));
    r.delta = std::pow(r.epsilon, (p - 2.0) / (2.0 * p));
    r.rate = r.delta;
    if (p == std::floor(p)) r.exponent = lipschitz_rate_exponent(static_cast<std::int64_t>(p));
    r.exponent_limit = Rational(1, 18);
    return r;
}

} // namespace gsmooth
