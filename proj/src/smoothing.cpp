#include "gsmooth/smoothing.hpp"

#include "gsmooth/errors.hpp"
#include "gsmooth/gaussian.hpp"
#include "gsmooth/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gsmooth {

void SmoothingParams::validate() const {
    require(std::isfinite(epsilon) && epsilon > 0.0, ErrorKind::ParameterDomain, "epsilon must be positive");
    require(std::isfinite(delta) && delta > 0.0, ErrorKind::ParameterDomain, "delta must be positive");
    require(std::isfinite(horizon) && horizon >= 1.0, ErrorKind::ParameterDomain, "horizon must be >= 1");
    require(dim >= 1, ErrorKind::ParameterDomain, "dimension must be positive");
}

void SmoothingParams::validate_unit() const {
    validate();
    require(epsilon < 1.0 && delta < 1.0, ErrorKind::ParameterDomain, "epsilon and delta must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Partitions

namespace {

void extend_partitions(std::vector<int>& remaining, Partition& current, std::vector<Partition>& out) {
    if (remaining.empty()) {
        out.push_back(current);
        return;
    }
    const int first = remaining.front();
    std::vector<int> rest(remaining.begin() + 1, remaining.end());
    current.push_back({first});
    extend_partitions(rest, current, out);
    current.pop_back();
    for (std::size_t i = 0; i < rest.size(); ++i) {
        std::vector<int> tail;
        tail.reserve(rest.size() - 1);
        for (std::size_t j = 0; j < rest.size(); ++j) {
            if (j != i) tail.push_back(rest[j]);
        }
        current.push_back({first, rest[i]});
        extend_partitions(tail, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<Partition> enumerate_p2_partitions(int n) {
    require(n >= 0, ErrorKind::ParameterDomain, "order must be nonnegative");
    require(n <= 8, ErrorKind::UnsupportedOrder, "partition enumeration supports n <= 8");
    std::vector<int> items(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) items[static_cast<std::size_t>(i)] = i;
    std::vector<Partition> out;
    Partition current;
    extend_partitions(items, current, out);
    return out;
}

// ---------------------------------------------------------------------------
// Sampling machinery

std::vector<double> smoothing_grid(const PiecewisePath& w, std::span<const PiecewisePath> directions,
                                   const Functional& h, const SmoothingParams& params) {
    params.validate();
    const double T = params.horizon;
    std::vector<double> pts = RegularizedPath(w, params.epsilon).breakpoints();
    for (const auto& x : directions) {
        const auto b = RegularizedPath(x, params.epsilon).breakpoints();
        pts.insert(pts.end(), b.begin(), b.end());
    }
    for (double t : h.evaluation_times()) pts.push_back(std::clamp(t, 0.0, T));
    const double spacing = std::min(params.epsilon, params.delta * params.delta) / 8.0;
    const auto steps = static_cast<std::size_t>(std::ceil(T / spacing));
    const auto uniform = uniform_grid(T, std::max<std::size_t>(steps, 1));
    pts.insert(pts.end(), uniform.begin(), uniform.end());
    std::sort(pts.begin(), pts.end());
    const double tol = 1e-12 * T;
    std::vector<double> grid{0.0};
    for (double p : pts) {
        if (p <= 0.0 || p > T) continue;
        if (p - grid.back() > tol) grid.push_back(p);
    }
    if (grid.back() != T) {
        if (T - grid.back() <= tol && grid.size() > 1) grid.back() = T;
        else grid.push_back(T);
    }
    return grid;
}

namespace {

void check_inputs(const Functional& h, const PiecewisePath& w, std::span<const PiecewisePath> dirs,
                  const SmoothingParams& params, const MonteCarlo& mc) {
    params.validate();
    require(mc.samples >= 2, ErrorKind::InsufficientData, "Monte Carlo needs at least two samples");
    require(w.dim() == params.dim && w.horizon() == params.horizon, ErrorKind::Shape,
            "path dimension/horizon differ from the smoothing parameters");
    require(w.dim() >= h.min_dim(), ErrorKind::Shape, "functional reads more coordinates than the path has");
    for (const auto& x : dirs) {
        require(x.dim() == params.dim && x.horizon() == params.horizon, ErrorKind::Shape,
                "direction dimension/horizon differ from the smoothing parameters");
    }
}

void check_cameron_martin(const PiecewisePath& x, double epsilon) {
    const auto v = RegularizedPath(x, epsilon).value(0.0);
    double n2 = 0.0;
    for (double c : v) n2 += c * c;
    require(std::sqrt(n2) <= 1e-12 * std::max(1.0, sup_norm(x)), ErrorKind::ParameterDomain,
            "regularized direction must vanish at time 0");
}

struct Prepared {
    std::vector<double> grid;
    std::size_t dim = 1;
    double horizon = 1.0;
    double delta = 1.0;
    std::vector<double> base;                     // w_ε on the grid
    std::vector<std::vector<double>> shifts;      // x_ε on the grid
    std::vector<std::vector<double>> gradients;   // ∇x_ε at cell midpoints

    Prepared(const Functional& h, const PiecewisePath& w, std::span<const PiecewisePath> dirs,
             const SmoothingParams& params)
        : grid(smoothing_grid(w, dirs, h, params)), dim(params.dim), horizon(params.horizon),
          delta(params.delta) {
        const RegularizedPath rw(w, params.epsilon);
        base.resize(grid.size() * dim);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            rw.value_into(grid[k], std::span<double>(base).subspan(k * dim, dim));
        }
        for (const auto& x : dirs) {
            const RegularizedPath rx(x, params.epsilon);
            std::vector<double> s(grid.size() * dim), g((grid.size() - 1) * dim);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                rx.value_into(grid[k], std::span<double>(s).subspan(k * dim, dim));
            }
            for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
                rx.gradient_into(0.5 * (grid[k] + grid[k + 1]), std::span<double>(g).subspan(k * dim, dim));
            }
            shifts.push_back(std::move(s));
            gradients.push_back(std::move(g));
        }
    }

    PathView view(std::span<const double> values) const {
        return PathView{grid, values, dim, horizon, Interpolation::Linear};
    }

    /// ∫∇x_ε dB for direction j given Brownian grid values.
    double wiener_integral(std::size_t j, std::span<const double> B) const {
        const auto& g = gradients[j];
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
            for (std::size_t c = 0; c < dim; ++c) {
                acc += g[k * dim + c] * (B[(k + 1) * dim + c] - B[k * dim + c]);
            }
        }
        return acc;
    }
};

/// Runs `per_sample(index, brownian, perturbed)` for every sample; the
/// perturbed buffer holds w_ε + δB on entry.
template <class F>
void for_each_sample(const Prepared& prep, const MonteCarlo& mc, F&& per_sample) {
    parallel_for(mc.samples, mc.workers, [&](std::size_t begin, std::size_t end) {
        std::vector<double> B(prep.grid.size() * prep.dim), P(B.size());
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng(mc.seed, i);
            fill_brownian(prep.grid, prep.dim, rng, B);
            for (std::size_t k = 0; k < P.size(); ++k) P[k] = prep.base[k] + prep.delta * B[k];
            per_sample(i, std::span<const double>(B), std::span<double>(P));
        }
    });
}

DerivativeEstimate finish(std::span<const double> values, const MonteCarlo& mc) {
    const auto s = summarize(values);
    return {s.mean, s.std_error, s.count, mc.seed};
}

} // namespace

DerivativeEstimate smooth_eval(const Functional& h, const PiecewisePath& w, const SmoothingParams& params,
                               const MonteCarlo& mc) {
    check_inputs(h, w, {}, params, mc);
    const Prepared prep(h, w, {}, params);
    std::vector<double> f(mc.samples);
    for_each_sample(prep, mc, [&](std::size_t i, std::span<const double>, std::span<double> P) {
        f[i] = h(prep.view(P));
    });
    return finish(f, mc);
}

DerivativeEstimate derivative_estimate(const Functional& h, const PiecewisePath& w,
                                       std::span<const PiecewisePath> directions,
                                       const SmoothingParams& params, const MonteCarlo& mc) {
    const int n = static_cast<int>(directions.size());
    if (n == 0) return smooth_eval(h, w, params, mc);
    require(n <= 3, ErrorKind::UnsupportedOrder, "derivative estimators support orders up to 3");
    check_inputs(h, w, directions, params, mc);
    for (const auto& x : directions) check_cameron_martin(x, params.epsilon);
    const Prepared prep(h, w, directions, params);
    const double inv_delta = 1.0 / params.delta;
    // Deterministic second-order blocks.
    std::vector<std::vector<double>> d2(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double v = -inv_delta * inv_delta *
                             grad_inner(directions[static_cast<std::size_t>(a)],
                                        directions[static_cast<std::size_t>(b)], params.epsilon);
            d2[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
            d2[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = v;
        }
    }
    const auto partitions = enumerate_p2_partitions(n);
    std::vector<double> f(mc.samples);
    for_each_sample(prep, mc, [&](std::size_t i, std::span<const double> B, std::span<double> P) {
        double d1[3];
        for (int j = 0; j < n; ++j) d1[j] = inv_delta * prep.wiener_integral(static_cast<std::size_t>(j), B);
        double weight = 0.0;
        for (const auto& pi : partitions) {
            double prod = 1.0;
            for (const auto& block : pi) {
                prod *= block.size() == 1
                            ? d1[block[0]]
                            : d2[static_cast<std::size_t>(block[0])][static_cast<std::size_t>(block[1])];
            }
            weight += prod;
        }
        f[i] = h(prep.view(P)) * weight;
    });
    return finish(f, mc);
}

DerivativeEstimate d2_covariance_estimate(const Functional& h, const PiecewisePath& w, const PiecewisePath& x,
                                          const PiecewisePath& y, const SmoothingParams& params,
                                          const MonteCarlo& mc) {
    const std::vector<PiecewisePath> dirs{x, y};
    check_inputs(h, w, dirs, params, mc);
    check_cameron_martin(x, params.epsilon);
    check_cameron_martin(y, params.epsilon);
    const Prepared prep(h, w, dirs, params);
    std::vector<double> hv(mc.samples), prod(mc.samples);
    for_each_sample(prep, mc, [&](std::size_t i, std::span<const double> B, std::span<double> P) {
        hv[i] = h(prep.view(P));
        prod[i] = prep.wiener_integral(0, B) * prep.wiener_integral(1, B);
    });
    const auto cov = summarize_covariance(hv, prod);
    const double scale = 1.0 / (params.delta * params.delta);
    return {scale * cov.mean, scale * cov.std_error, cov.count, mc.seed};
}

DerivativeEstimate finite_difference_estimate(const Functional& h, const PiecewisePath& w,
                                              std::span<const PiecewisePath> directions,
                                              const SmoothingParams& params, const MonteCarlo& mc,
                                              double relative_step) {
    const std::size_t n = directions.size();
    require(n == 1 || n == 2, ErrorKind::UnsupportedOrder, "finite differences support orders 1 and 2");
    require(relative_step > 0.0, ErrorKind::ParameterDomain, "step must be positive");
    check_inputs(h, w, directions, params, mc);
    const Prepared prep(h, w, directions, params);
    std::vector<double> steps(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double norm = sup_norm(directions[j]);
        require(norm > 0.0, ErrorKind::ParameterDomain, "direction must be nonzero");
        steps[j] = relative_step * norm;
    }
    std::vector<double> f(mc.samples);
    for_each_sample(prep, mc, [&](std::size_t i, std::span<const double>, std::span<double> P) {
        std::vector<double> Q(P.size());
        auto eval_shift = [&](double a, double b) {
            for (std::size_t k = 0; k < Q.size(); ++k) {
                double v = P[k] + a * prep.shifts[0][k];
                if (n == 2) v += b * prep.shifts[1][k];
                Q[k] = v;
            }
            return h(prep.view(Q));
        };
        if (n == 1) {
            f[i] = (eval_shift(steps[0], 0.0) - eval_shift(-steps[0], 0.0)) / (2.0 * steps[0]);
        } else {
            const double s = steps[0], t = steps[1];
            f[i] = (eval_shift(s, t) - eval_shift(s, -t) - eval_shift(-s, t) + eval_shift(-s, -t)) / (4.0 * s * t);
        }
    });
    return finish(f, mc);
}

// ---------------------------------------------------------------------------
// Closed forms

double c_eps_delta_T(double epsilon, double delta, double horizon) {
    require(epsilon > 0.0 && delta > 0.0 && horizon > 0.0, ErrorKind::ParameterDomain,
            "epsilon, delta and T must be positive");
    const double u = 1.0 / (epsilon * delta);
    return 1.0 + std::sqrt(horizon) * u + std::numbers::sqrt2 * horizon * u * u +
           std::sqrt(50.0 / std::numbers::pi) * std::pow(horizon, 1.5) * u * u * u;
}

double m0_norm_bound(const SmoothingParams& params, double sup_h) {
    params.validate();
    require(sup_h >= 0.0, ErrorKind::ParameterDomain, "sup|h| must be nonnegative");
    return sup_h * c_eps_delta_T(params.epsilon, params.delta, params.horizon);
}

double m0c_constant(const SmoothingParams& params, const SmoothnessCertificate& cert) {
    params.validate();
    require(cert.value >= 0.0, ErrorKind::ParameterDomain, "certificate must be nonnegative");
    const double e = params.epsilon, d = params.delta;
    if (cert.kind == SmoothnessCertificate::Kind::Bounded) {
        return cert.value * std::sqrt(params.horizon) / (e * e * d * d);
    }
    return cert.value / std::sqrt(std::numbers::pi) / (e * e * d);
}

double derivative_constant(int k) {
    require(k >= 0, ErrorKind::ParameterDomain, "order must be nonnegative");
    const double crude = abs_gaussian_moment(k) * static_cast<double>(enumerate_p2_partitions(k).size());
    double published = 0.0;
    if (k == 1) published = 1.0;
    if (k == 2) published = 3.0;
    return std::max(crude, published);
}

double derivative_norm_bound(const SmoothingParams& params, double sup_h, int k) {
    params.validate();
    return sup_h * std::pow(params.horizon, k / 2.0) * derivative_constant(k) *
           std::pow(params.epsilon * params.delta, -k);
}

double d2_energy_bound(const SmoothingParams& params, double z_norm, double sup_h, double energy) {
    params.validate();
    require(energy >= 0.0, ErrorKind::ParameterDomain, "energy must be nonnegative");
    return std::sqrt(2.0 * params.horizon) / (params.delta * params.delta * params.epsilon) * z_norm * sup_h *
           std::sqrt(energy);
}

double d2_energy_lipschitz_bound(const SmoothingParams& params, double z_norm, double lip_h, double energy) {
    params.validate();
    require(energy >= 0.0, ErrorKind::ParameterDomain, "energy must be nonnegative");
    return std::sqrt(2.0 / std::numbers::pi) / (params.delta * params.epsilon) * z_norm * lip_h *
           std::sqrt(energy);
}

double lipschitz_derivative_bound(const SmoothingParams& params, double dn_norm, int n, int k) {
    params.validate();
    require(n >= 1 && k >= 0, ErrorKind::ParameterDomain, "need n >= 1 and k >= 0");
    return dn_norm * derivative_constant(k) * std::pow(params.horizon, k / 2.0) *
           std::pow(params.epsilon, -(n + k)) * std::pow(params.delta, -k);
}

double lipschitz_m0_bound(const SmoothingParams& params) {
    params.validate_unit();
    return 6.0 * params.horizon / (std::pow(params.epsilon, 3) * params.delta * params.delta);
}

} // namespace gsmooth
