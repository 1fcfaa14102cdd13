// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "gsmooth/bounds.hpp"
#include "gsmooth/gaussian.hpp"
#include "gsmooth/harness.hpp"
#include "gsmooth/io.hpp"
#include "gsmooth/smoothing.hpp"
#include "gsmooth/tightness.hpp"
#include "support.hpp"

#include <fmt/core.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace gsmooth;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    if (!pass) ++failures;
    fmt::print("{} criterion {}: {} [{}]\n", pass ? "PASS" : "FAIL", id, what, detail);
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

struct Estimate {
    double mean, se;
};

Estimate mean_se(const std::vector<double>& v) {
    const auto s = summarize(v);
    return {s.mean, s.std_error};
}

// ---------------------------------------------------------------------------

void rates() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ind = example_rate_params(3.0, 1.0, 1e6);
    const auto lip = example_lipschitz_params(3.0, 1e6);
    // (p-2)/(20p-4) and (p-2)/(18p-12): ratios of leading coefficients as p → ∞.
    const Rational ind_limit(1, 20), lip_limit(1, 18);
    const double elapsed = seconds_since(t0);
    const bool ok = ind.exponent == Rational(1, 56) && ind.exponent_limit == ind_limit &&
                    lip.exponent == Rational(1, 42) && lip.exponent_limit == lip_limit &&
                    indicator_rate_exponent(3) == Rational(1, 56) && lipschitz_rate_exponent(3) == Rational(1, 42) &&
                    elapsed < 1e-3;
    report(1, ok, "rate exponents",
           fmt::format("indicator {} limit {}, lipschitz {} limit {}, {:.1f} us", ind.exponent ? ind.exponent->str() : "-",
                       ind.exponent_limit.str(), lip.exponent ? lip.exponent->str() : "-", lip.exponent_limit.str(),
                       elapsed * 1e6));
}

void constants() {
    const double expected = 1.0 + 1.0 + std::sqrt(2.0) + std::sqrt(50.0 / std::numbers::pi);
    const double c = c_eps_delta_T(1.0, 1.0, 1.0);
    bool ok = rel_close(c, expected, 1e-12);
    std::string detail = fmt::format("C(1,1,1) = {:.15g}", c);
    TheoremInputs in;
    in.set = SetK(Functional::sup_indicator(1.0), 0.0);
    for (double n : {1e2, 1e4}) {
        const double delta = 0.5;
        const double gamma = delta * std::sqrt(10.0 * std::log(n));
        const double bm = theorem_bound(in, 0.5, delta, 0.1, gamma).bm;
        ok = ok && rel_close(bm, 4.0 * std::pow(n, -5.0), 1e-12);
        detail += fmt::format(", bm(n={:g}) = {:.6e}", n, bm);
    }
    report(2, ok, "constant evaluation", detail);
}

void partitions() {
    bool ok = true;
    std::string counts;
    for (int n = 0; n <= 5; ++n) {
        const auto got = enumerate_p2_partitions(n).size();
        ok = ok && got == oracle::p2_partition_count(n);
        counts += (n ? "," : "") + std::to_string(got);
    }
    report(3, ok, "partition enumeration", "counts " + counts);
}

void girsanov_vs_finite_difference() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> times{0.5, 0.9};
    const std::vector<double> a{1.0, -0.7};
    const double offset = 0.1, scale = 0.8;
    const auto h = Functional::smooth_cylinder(times, {{a[0]}, {a[1]}}, offset, scale);
    const auto w = PiecewisePath::indicator(0.6, 1.0, 0.5);
    const auto x = PiecewisePath::indicator(0.3, 1.0);
    const auto y = PiecewisePath::indicator_difference(0.3, 0.7, 1.0);
    const SmoothingParams p{0.2, 0.5, 1.0, 1};
    const std::size_t N = 100000;

    // Oracle: exact B at the two times, quadrature window averages, common random numbers.
    auto avg = [&](const PiecewisePath& path, double t) { return oracle::window_average(path, t, p.epsilon); };
    const double w5 = avg(w, 0.5), w9 = avg(w, 0.9);
    const double x5 = avg(x, 0.5), x9 = avg(x, 0.9), y5 = avg(y, 0.5), y9 = avg(y, 0.9);
    const double step = 1e-3; // both directions have sup norm 1
    std::mt19937_64 gen(20240611);
    std::normal_distribution<double> g;
    std::vector<double> fx(N), fy(N), fxy(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double b5 = std::sqrt(0.5) * g(gen);
        const double b9 = b5 + std::sqrt(0.4) * g(gen);
        auto f = [&](double sx, double sy) {
            const double v5 = w5 + sx * x5 + sy * y5 + p.delta * b5;
            const double v9 = w9 + sx * x9 + sy * y9 + p.delta * b9;
            return oracle::phi((a[0] * v5 + a[1] * v9 - offset) / scale);
        };
        fx[i] = (f(step, 0.0) - f(-step, 0.0)) / (2.0 * step);
        fy[i] = (f(0.0, step) - f(0.0, -step)) / (2.0 * step);
        fxy[i] = (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step)) / (4.0 * step * step);
    }
    const MonteCarlo mc{N, 31, 0};
    struct Case {
        std::string name;
        std::vector<PiecewisePath> dirs;
        Estimate ref;
    };
    const std::vector<Case> cases{{"n=1 [I_0.3]", {x}, mean_se(fx)},
                                  {"n=1 [I_0.3 - I_0.7]", {y}, mean_se(fy)},
                                  {"n=2 [I_0.3, I_0.3 - I_0.7]", {x, y}, mean_se(fxy)}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto est = derivative_estimate(h, w, c.dirs, p, mc);
        const double z = std::abs(est.estimate - c.ref.mean) / std::hypot(est.std_error, c.ref.se);
        ok = ok && z <= 3.0;
        detail += fmt::format("{}: {:.5f}±{:.5f} vs {:.5f}±{:.5f} ({:.2f} SE); ", c.name, est.estimate, est.std_error,
                              c.ref.mean, c.ref.se, z);
    }
    ok = ok && seconds_since(t0) < 300.0;
    report(4, ok, "change-of-measure derivatives vs finite differences", detail + fmt::format("{:.1f} s", seconds_since(t0)));
}

void second_derivative_envelope() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto h = Functional::sup_indicator(0.5);
    const auto zero = PiecewisePath::constant(0.0, 1.0);
    Rng rng(55, 0);
    bool ok = true;
    double worst = -1e300;
    for (int i = 0; i < 12; ++i) {
        const double eps = 0.2 + 0.1 * rng.uniform();
        const double delta = 0.3 + 0.3 * rng.uniform();
        const double r = eps + 0.05 + (0.95 - eps - 0.05) * rng.uniform();
        double s = eps + 0.05 + (0.95 - eps - 0.05) * rng.uniform();
        double t = eps + 0.05 + (0.95 - eps - 0.05) * rng.uniform();
        if (s > t) std::swap(s, t);
        if (t - s < 1e-3) t = s + 1e-3;
        const double x1 = 0.5 + rng.uniform(), x2 = 0.5 + rng.uniform();
        const SmoothingParams p{eps, delta, 1.0, 1};
        const auto est = d2_covariance_estimate(h, zero, PiecewisePath::indicator(r, 1.0, x1),
                                                PiecewisePath::indicator_difference(s, t, 1.0, x2), p,
                                                MonteCarlo{20000, derive_seed(55, std::to_string(i)), 0});
        const double bound = std::sqrt(1.0) / std::pow(eps * delta, 2.0) * x1 * x2 * std::sqrt(t - s);
        const double lhs = std::abs(est.estimate) - 3.0 * est.std_error;
        ok = ok && lhs <= bound;
        worst = std::max(worst, lhs / bound);
    }
    ok = ok && seconds_since(t0) < 600.0;
    report(5, ok, "second-derivative envelope on 12 points",
           fmt::format("max (|est| - 3 SE)/bound = {:.4f}, {:.1f} s", worst, seconds_since(t0)));
}

void exact_algebra() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(66, 0);
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double eps = 0.01 + 0.2 * rng.uniform();
        double s = eps + (1.0 - 2.0 * eps) * rng.uniform();
        double t = eps + (1.0 - 2.0 * eps) * rng.uniform();
        if (s > t) std::swap(s, t);
        if (t - s < 1e-4) continue;
        const double x2 = 0.1 + 2.0 * rng.uniform();
        const auto x = PiecewisePath::indicator_difference(s, t, 1.0, x2);
        auto grad = [&](double u) {
            return (oracle::value_at(x, u + eps) - oracle::value_at(x, u - eps)) / (2.0 * eps);
        };
        const double quad = oracle::integrate([&](double u) { return grad(u) * grad(u); }, 0.0, 1.0,
                                              {s - eps, s + eps, t - eps, t + eps});
        const double closed = indicator_difference_energy(s, t, x2, eps);
        const double exact = grad_energy(x, eps);
        const double err = std::max(std::abs(closed - quad), std::abs(exact - quad)) / quad;
        worst = std::max(worst, err);
        ok = ok && err <= 1e-10;
    }
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        const auto w = oracle::random_path(rng, 2 + static_cast<std::size_t>(20 * rng.uniform()), 1.0,
                                           Interpolation::Step);
        const double eps = 0.005 + 0.5 * rng.uniform();
        if (!(regularize(w, eps).sup_gradient() <= sup_norm(w) / eps)) ++violations;
    }
    ok = ok && violations == 0 && seconds_since(t0) < 10.0;
    report(6, ok, "gradient energy and gradient bound",
           fmt::format("max relative error {:.2e} on 50 instances, {} violations on 100 step paths, {:.2f} s", worst,
                       violations, seconds_since(t0)));
}

void tail_domination() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    {
        BrownianConfig cfg;
        cfg.grid = uniform_grid(1.0, 2048);
        cfg.seed = 71;
        std::vector<PiecewisePath> paths;
        paths.reserve(10000);
        for (std::size_t i = 0; i < 10000; ++i) paths.push_back(sample_bm(cfg, i));
        for (double eps : {0.01, 0.05}) {
            for (double lambda : {0.25, 0.5}) {
                const double bound = std::min(1.0, gaussian_regularization_tail({1.0, 1.0}, 4.0, eps, lambda, 1.0));
                std::size_t hits = 0;
                for (const auto& p : paths) hits += regularize(p, eps).sup_difference() > lambda ? 1 : 0;
                const auto e = wilson_interval(hits, paths.size());
                ok = ok && bound >= e.ci_hi;
                detail += fmt::format("(a) eps={} lambda={}: {:.4g} >= {:.4g}; ", eps, lambda, bound, e.ci_hi);
            }
        }
        for (double z : {0.5, 1.0, 1.5, 2.0}) {
            std::size_t hits = 0;
            for (const auto& p : paths) hits += sup_norm(p) >= z ? 1 : 0;
            const auto e = wilson_interval(hits, paths.size());
            const double bound = std::min(1.0, bm_supnorm_tail(z, 1, 1.0));
            ok = ok && bound >= e.ci_hi;
            detail += fmt::format("(c) z={}: {:.4f} >= {:.4f}; ", z, bound, e.ci_hi);
        }
    }
    {
        ProcessModel m;
        m.variant = IidPartialSum{Innovation::Rademacher, 1000, 3.0, 5.0};
        std::vector<PiecewisePath> paths;
        paths.reserve(10000);
        for (std::size_t i = 0; i < 10000; ++i) {
            Rng rng(derive_seed(72, "rademacher"), i);
            paths.push_back(simulate_partial_sum(m, rng));
        }
        const auto e = empirical_mod_tail(paths, 0.05, 0.75);
        const double bound = std::min(1.0, iid_partial_sum_envelope(3.0, 1.0, 1000.0, 0.05, 0.75, 1.0));
        ok = ok && bound >= e.ci_hi;
        detail += fmt::format("(b) {:.4g} >= {:.4g}; ", bound, e.ci_hi);
    }
    ok = ok && seconds_since(t0) < 900.0;
    report(7, ok, "tail-envelope domination", detail + fmt::format("{:.1f} s", seconds_since(t0)));
}

void end_to_end() {
    const auto t0 = std::chrono::steady_clock::now();
    const SetK K(Functional::sup_indicator(1.0));
    bool ok = true;
    std::string detail;
    std::optional<BoundBreakdown> previous;
    for (std::size_t n : {std::size_t{100}, std::size_t{10000}}) {
        ProcessModel m;
        m.variant = IidPartialSum{Innovation::Rademacher, n, 4.0, 5.0};
        TheoremInputs in;
        in.kappa1 = in.kappa2 = order_only_kappa(1.0, 1.0, static_cast<double>(n));
        in.kappa_order_only = true;
        in.x_tail = m.envelope();
        in.z_tail = TailEnvelope::gaussian({1.0, 1.0}, 4.0, 1.0);
        in.set = K;
        OptimizeOptions o;
        if (previous) o.extra_candidates.push_back(*previous);
        const auto best = optimize_bound(in, Objective::Indicator, SearchBox{}, o).best;
        const auto d = estimate_set_discrepancy(m, K, MonteCarlo{100000, derive_seed(8, std::to_string(n)), 0});
        ok = ok && best.total >= d.ci_hi;
        if (previous) ok = ok && best.total <= previous->total;
        detail += fmt::format("n={}: bound {:.4f} (kappa order-only) >= |P(X in K) - P(Z in K)| upper {:.4f}; ", n,
                              best.total, d.ci_hi);
        previous = best;
    }
    ok = ok && seconds_since(t0) < 1200.0;
    report(8, ok, "assembled bound dominates and is nonincreasing in n", detail + fmt::format("{:.1f} s", seconds_since(t0)));
}

std::map<std::string, std::string> slurp_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files[fs::relative(e.path(), root).string()] = s.str();
    }
    return files;
}

void determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path base = fs::temp_directory_path() / fmt::format("gsmooth_acceptance_{}", ::getpid());
    std::vector<std::map<std::string, std::string>> trees;
    for (unsigned workers : {1u, 1u, 8u}) {
        ValidateOptions o;
        o.suite = Suite::All;
        o.seed = 7;
        o.workers = workers;
        const fs::path dir = base / std::to_string(trees.size());
        write_report(run_validation(o), dir);
        trees.push_back(slurp_tree(dir));
    }
    fs::remove_all(base);
    const bool ok = !trees[0].empty() && trees[0] == trees[1] && trees[0] == trees[2];
    report(9, ok, "byte-identical validation reports (two runs, 1 vs 8 workers)",
           fmt::format("{} files compared, {:.1f} s", trees[0].size(), seconds_since(t0)));
}

} // namespace

int main() {
    const std::vector<std::function<void()>> criteria{
        rates, constants, partitions, girsanov_vs_finite_difference, second_derivative_envelope,
        exact_algebra, tail_domination, end_to_end, determinism};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, "raised an exception", e.what());
        }
    }
    fmt::print("{}/{} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
}
