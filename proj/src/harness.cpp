#include "gsmooth/harness.hpp"

#include "gsmooth/errors.hpp"
#include "gsmooth/gaussian.hpp"
#include "gsmooth/io.hpp"
#include "gsmooth/smoothing.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace gsmooth {

// ---------------------------------------------------------------------------
// Process models

std::string_view to_string(Innovation d) noexcept {
    switch (d) {
    case Innovation::Rademacher: return "rademacher";
    case Innovation::Uniform: return "uniform";
    case Innovation::Exponential: return "exponential";
    case Innovation::StudentT: return "student_t";
    }
    return "unknown";
}

Innovation parse_innovation(std::string_view name) {
    if (name == "rademacher") return Innovation::Rademacher;
    if (name == "uniform") return Innovation::Uniform;
    if (name == "exponential") return Innovation::Exponential;
    if (name == "student_t") return Innovation::StudentT;
    fail(ErrorKind::Config, "distribution must be rademacher, uniform, exponential or student_t");
}

void ProcessModel::validate() const {
    require(horizon > 0.0 && std::isfinite(horizon), ErrorKind::ParameterDomain, "horizon must be positive");
    require(n() >= 1, ErrorKind::ParameterDomain, "n must be positive");
    if (const auto* s = std::get_if<IidPartialSum>(&variant)) {
        require(s->p >= 2.0, ErrorKind::UnsupportedMoment, "moment order must be at least 2");
        if (s->distribution == Innovation::StudentT) {
            require(s->nu > 2.0 && s->nu > s->p, ErrorKind::UnsupportedMoment,
                    "Student-t needs nu > max(2, p) for a finite p-th moment");
        }
    } else {
        const auto& m = std::get<MixingSum>(variant);
        require(std::abs(m.rho) < 1.0, ErrorKind::ParameterDomain, "autoregression needs |rho| < 1");
        require(m.certificate.p > 2.0 && m.certificate.k > 0.0 && m.certificate.c_p >= 0.0,
                ErrorKind::ParameterDomain, "mixing certificate needs p > 2, k > 0, c_p >= 0");
    }
}

std::size_t ProcessModel::n() const noexcept {
    return std::visit([](const auto& m) { return m.n; }, variant);
}

double ProcessModel::moment_order() const noexcept {
    if (const auto* s = std::get_if<IidPartialSum>(&variant)) return s->p;
    return std::get<MixingSum>(variant).certificate.p;
}

namespace {

double centred_exponential_moment(double p) {
    // E|E - 1|^p = e^{-1} Γ(p+1) + ∫_0^1 u^p e^{u-1} du.
    double series = 0.0, fact = 1.0;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) fact *= k;
        series += 1.0 / (fact * (p + k + 1.0));
    }
    return std::exp(-1.0) * (std::tgamma(p + 1.0) + series);
}

double student_t_moment(double p, double nu) {
    // E|T_ν|^p scaled to unit variance.
    const double raw = std::pow(nu, p / 2.0) * std::tgamma((p + 1.0) / 2.0) * std::tgamma((nu - p) / 2.0) /
                       (std::sqrt(std::numbers::pi) * std::tgamma(nu / 2.0));
    return raw * std::pow((nu - 2.0) / nu, p / 2.0);
}

double ar_bound(double rho) { return std::sqrt(3.0) * std::sqrt((1.0 + std::abs(rho)) / (1.0 - std::abs(rho))); }

} // namespace

double ProcessModel::abs_moment() const {
    if (const auto* s = std::get_if<IidPartialSum>(&variant)) {
        const double p = s->p;
        switch (s->distribution) {
        case Innovation::Rademacher: return 1.0;
        case Innovation::Uniform: return std::pow(std::sqrt(3.0), p) / (p + 1.0);
        case Innovation::Exponential: return centred_exponential_moment(p);
        case Innovation::StudentT: return student_t_moment(p, s->nu);
        }
    }
    const auto& m = std::get<MixingSum>(variant);
    return std::pow(lp_norm_bound(), m.certificate.p);
}

double ProcessModel::lp_norm_bound() const {
    if (std::holds_alternative<IidPartialSum>(variant)) return std::pow(abs_moment(), 1.0 / moment_order());
    const auto& m = std::get<MixingSum>(variant);
    return m.certificate.c_p > 0.0 ? m.certificate.c_p : ar_bound(m.rho);
}

TailEnvelope ProcessModel::envelope(std::optional<double> rosenthal) const {
    validate();
    const double nn = static_cast<double>(n());
    if (const auto* s = std::get_if<IidPartialSum>(&variant)) {
        return TailEnvelope::iid(s->p, abs_moment(), nn, horizon, rosenthal);
    }
    MixingModel cert = std::get<MixingSum>(variant).certificate;
    cert.c_p = lp_norm_bound();
    return TailEnvelope::mixing(cert, nn, horizon);
}

double draw_innovation(const IidPartialSum& model, Rng& rng) {
    switch (model.distribution) {
    case Innovation::Rademacher: return (rng() >> 63) ? 1.0 : -1.0;
    case Innovation::Uniform: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    case Innovation::Exponential: return -std::log(rng.uniform()) - 1.0;
    case Innovation::StudentT: {
        const double z = rng.normal();
        const double chi2 = 2.0 * rng.gamma(model.nu / 2.0);
        return z / std::sqrt(chi2 / model.nu) * std::sqrt((model.nu - 2.0) / model.nu);
    }
    }
    return 0.0;
}

PiecewisePath simulate_partial_sum(const ProcessModel& model, Rng& rng) {
    const std::size_t n = model.n();
    const double nn = static_cast<double>(n);
    const auto steps = static_cast<std::size_t>(std::floor(nn * model.horizon));
    const double scale = 1.0 / std::sqrt(nn);
    std::vector<double> times(steps + 1), values(steps + 1);
    times[0] = 0.0;
    values[0] = 0.0;
    double sum = 0.0;
    if (const auto* s = std::get_if<IidPartialSum>(&model.variant)) {
        if (s->distribution == Innovation::Rademacher) {
            std::uint64_t word = 0;
            for (std::size_t j = 1; j <= steps; ++j) {
                const std::size_t bit = (j - 1) % 64;
                if (bit == 0) word = rng();
                sum += ((word >> bit) & 1U) ? 1.0 : -1.0;
                times[j] = static_cast<double>(j) / nn;
                values[j] = sum * scale;
            }
        } else {
            for (std::size_t j = 1; j <= steps; ++j) {
                sum += draw_innovation(*s, rng);
                times[j] = static_cast<double>(j) / nn;
                values[j] = sum * scale;
            }
        }
    } else {
        const auto& m = std::get<MixingSum>(model.variant);
        const double innov = std::sqrt(1.0 - m.rho * m.rho);
        double x = 0.0;
        for (std::size_t j = 1; j <= steps; ++j) {
            const double u = std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
            x = j == 1 ? u : m.rho * x + innov * u;
            sum += x;
            times[j] = static_cast<double>(j) / nn;
            values[j] = sum * scale;
        }
    }
    return PiecewisePath(1, model.horizon, std::move(times), std::move(values), Interpolation::Step);
}

std::optional<double> exact_bm_probability(const SetK& K, double horizon) {
    if (const auto* s = K.indicator.as_sup()) {
        if (s->coord != 0) return std::nullopt;
        return bm_max_cdf(s->level, horizon);
    }
    const auto* f = K.indicator.as_finite_dim();
    if (f == nullptr || f->times.size() != 1) return std::nullopt;
    // One time: the set is an interval for B(t₁) ~ N(0, t₁).
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& h : f->halfspaces) {
        const double a = h.a.front();
        if (a > 0.0) hi = std::min(hi, h.b / a);
        else if (a < 0.0) lo = std::max(lo, h.b / a);
        else if (f->strict ? !(0.0 < h.b) : !(0.0 <= h.b)) return 0.0;
    }
    if (!(lo < hi)) return 0.0;
    const double t = std::min(f->times.front(), horizon);
    if (t <= 0.0) return (lo <= 0.0 && 0.0 <= hi) ? 1.0 : 0.0;
    const double sd = std::sqrt(t);
    return normal_cdf(hi / sd) - normal_cdf(lo / sd);
}

DiscrepancyEstimate estimate_set_discrepancy(const ProcessModel& model, const SetK& K, const MonteCarlo& mc) {
    model.validate();
    require(mc.samples >= 2, ErrorKind::InsufficientData, "need at least two samples");
    std::vector<unsigned char> hit(mc.samples);
    parallel_for(mc.samples, mc.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng(mc.seed, i);
            hit[i] = K.contains(simulate_partial_sum(model, rng)) ? 1 : 0;
        }
    });
    std::size_t count = 0;
    for (auto h : hit) count += h;
    DiscrepancyEstimate out;
    out.x_side = wilson_interval(count, mc.samples);
    double z_lo, z_hi;
    if (const auto exact = exact_bm_probability(K, model.horizon)) {
        out.z_side = *exact;
        out.z_exact = true;
        z_lo = z_hi = *exact;
    } else {
        BrownianConfig cfg;
        cfg.horizon = model.horizon;
        cfg.grid = uniform_grid(model.horizon, 1024);
        cfg.seed = derive_seed(mc.seed, "z_side");
        std::vector<unsigned char> zhit(mc.samples);
        parallel_for(mc.samples, mc.workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) zhit[i] = K.contains(sample_bm(cfg, i)) ? 1 : 0;
        });
        std::size_t zc = 0;
        for (auto h : zhit) zc += h;
        const auto z = wilson_interval(zc, mc.samples);
        out.z_side = z.estimate;
        out.z_std_error = z.std_error();
        out.z_exact = false;
        z_lo = z.ci_lo;
        z_hi = z.ci_hi;
    }
    out.discrepancy = std::abs(out.x_side.estimate - out.z_side);
    const double a = out.x_side.ci_lo - z_hi, b = out.x_side.ci_hi - z_lo;
    if (a <= 0.0 && b >= 0.0) {
        out.ci_lo = 0.0;
        out.ci_hi = std::max(-a, b);
    } else {
        out.ci_lo = std::min(std::abs(a), std::abs(b));
        out.ci_hi = std::max(std::abs(a), std::abs(b));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report plumbing

std::string_view to_string(Tag t) noexcept {
    switch (t) {
    case Tag::SmoothingBound: return "smoothing_bound";
    case Tag::LevyProkhorovBound: return "levy_prokhorov_bound";
    case Tag::LipschitzBound: return "lipschitz_bound";
    case Tag::ChainingLemma: return "chaining_lemma";
    case Tag::MixingLemma: return "mixing_lemma";
    case Tag::GaussianTail: return "gaussian_tail";
    case Tag::BrownianSupTail: return "brownian_sup_tail";
    case Tag::BoundaryEnlargement: return "boundary_enlargement";
    case Tag::DerivativeFormula: return "derivative_formula";
    case Tag::DerivativeBounds: return "derivative_bounds";
    case Tag::SecondDerivativeSmoothness: return "second_derivative_smoothness";
    case Tag::RateExample: return "rate_example";
    case Tag::PartitionCount: return "partition_count";
    case Tag::PathRegularization: return "path_regularization";
    case Tag::Plumbing: return "plumbing";
    }
    return "unknown";
}

std::string_view to_string(RowKind k) noexcept {
    switch (k) {
    case RowKind::Domination: return "domination";
    case RowKind::Agreement: return "agreement";
    case RowKind::Exact: return "exact";
    case RowKind::Consistency: return "consistency";
    case RowKind::Envelope: return "envelope";
    }
    return "unknown";
}

bool Report::passed() const noexcept { return failures() == 0; }

std::size_t Report::failures() const noexcept {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

std::string_view to_string(Suite s) noexcept {
    switch (s) {
    case Suite::Rates: return "rates";
    case Suite::Gaussian: return "gaussian";
    case Suite::Tightness: return "tightness";
    case Suite::Smoothing: return "smoothing";
    case Suite::Theorem: return "theorem";
    case Suite::All: return "all";
    }
    return "unknown";
}

Suite parse_suite(std::string_view name) {
    for (Suite s : {Suite::Rates, Suite::Gaussian, Suite::Tightness, Suite::Smoothing, Suite::Theorem, Suite::All}) {
        if (to_string(s) == name) return s;
    }
    fail(ErrorKind::Config, "suite must be rates, gaussian, tightness, smoothing, theorem or all");
}

const std::vector<std::string>& required_operations() {
    static const std::vector<std::string> ops{
        // paths
        "eval", "sup_norm", "modulus_of_continuity", "max_jump", "regularize", "grad_energy",
        // gaussian
        "sample_bm", "bm_supnorm_tail", "bm_max_cdf", "gaussian_regularization_tail", "abs_gaussian_moment",
        // functionals
        "eval_functional", "enlarge", "boundary_enlargement_bound",
        // smoothing
        "smooth_eval", "enumerate_p2_partitions", "derivative_estimate", "d2_covariance_estimate", "m0_norm_bound",
        "m0c_constant",
        // tightness
        "chaining_bound", "mixing_mod_bound", "iid_partial_sum_envelope", "empirical_mod_tail",
        // bounds
        "c_eps_delta_T", "theorem_bound", "lp_bound", "lipschitz_bound", "optimize_bound", "example_rate_params",
        "example_lipschitz_params",
        // harness
        "simulate_partial_sum", "estimate_set_discrepancy", "validate_theorem", "validate_smoothing"};
    return ops;
}

namespace {

struct Interval {
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double se = 0.0;
};

Interval from_proportion(const ProportionEstimate& p) { return {p.estimate, p.ci_lo, p.ci_hi, p.std_error()}; }

std::string num(double x) { return format_double(x); }

using Sampler = std::function<std::vector<double>(std::size_t count, std::uint64_t seed)>;

class Runner {
public:
    Runner(const ValidateOptions& o, Report& r) : opt_(o), report_(r) {}

    std::size_t scalar(double factor = 1.0) const { return scaled(static_cast<double>(opt_.scalar_samples) * factor); }
    std::size_t paths(double factor = 1.0) const { return scaled(static_cast<double>(opt_.path_samples) * factor); }
    unsigned workers() const { return opt_.workers; }
    std::uint64_t seed(std::string_view label) const { return derive_seed(opt_.seed, label); }
    MonteCarlo mc(std::string_view label, std::size_t samples) const { return {samples, seed(label), opt_.workers}; }
    Report& report() { return report_; }

    void touch(std::initializer_list<std::string_view> ops) {
        for (auto op : ops) report_.exercised.emplace(op);
    }

    /// Cached statistic per (label, count, seed).
    const std::vector<double>& sample(const std::string& label, std::size_t count, std::uint64_t seed,
                                      const Sampler& f) {
        const std::string key = label + "|" + std::to_string(count) + "|" + std::to_string(seed);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, f(count, seed)).first;
        return it->second;
    }

    void add(ReportRow row) { report_.rows.push_back(std::move(row)); }

    void exact(std::string id, std::string quantity, Tag tag, double expected, double computed, double rel_tol,
               std::string note = {}) {
        const double scale = expected == 0.0 ? 1.0 : std::abs(expected);
        const double diff = std::abs(computed - expected);
        ReportRow r{std::move(id), std::move(quantity), tag, RowKind::Exact, expected, computed, computed, computed,
                    rel_tol * scale - diff, diff <= rel_tol * scale, std::move(note)};
        add(std::move(r));
    }

    void consistency(std::string id, std::string quantity, Tag tag, double upper, double value, std::string note = {}) {
        ReportRow r{std::move(id), std::move(quantity), tag, RowKind::Consistency, upper, value, value, value,
                    upper - value, value <= upper, std::move(note)};
        add(std::move(r));
    }

    void agreement(std::string id, std::string quantity, Tag tag, double a, double sa, double b, double sb,
                   std::string note = {}) {
        const double se = std::sqrt(sa * sa + sb * sb);
        const double diff = a - b;
        ReportRow r{std::move(id), std::move(quantity), tag, RowKind::Agreement, 3.0 * se, diff, diff - 3.0 * se,
                    diff + 3.0 * se, 3.0 * se - std::abs(diff), std::abs(diff) <= 3.0 * se, std::move(note)};
        if (!r.note.empty()) r.note += "; ";
        r.note += "reference " + num(b);
        add(std::move(r));
    }

    void envelope(std::string id, std::string quantity, Tag tag, double bound, double estimate, double se,
                  std::string note = {}) {
        const double mag = std::abs(estimate);
        ReportRow r{std::move(id), std::move(quantity), tag, RowKind::Envelope, bound, mag, mag - 3.0 * se,
                    mag + 3.0 * se, bound - (mag - 3.0 * se), mag - 3.0 * se <= bound, std::move(note)};
        add(std::move(r));
    }

    /// bound ≥ upper CI; a failure within one standard error reruns once at 4× budget.
    void dominate(std::string id, std::string quantity, Tag tag, double bound,
                  const std::function<Interval(std::size_t, std::uint64_t)>& estimator, std::size_t budget,
                  std::string note = {}, std::string stream = {}) {
        // Rows naming the same stream share their samples.
        if (stream.empty()) stream = id;
        Interval e = estimator(budget, seed(stream));
        bool pass = bound >= e.ci_hi;
        if (!pass && e.ci_hi - bound <= e.se) {
            e = estimator(4 * budget, seed(stream + "/retry"));
            pass = bound >= e.ci_hi;
            note = append(note, "rerun at 4x budget");
        }
        if (bound > 1.0) note = append(note, "vacuous");
        ReportRow r{std::move(id), std::move(quantity), tag, RowKind::Domination, bound, e.estimate, e.ci_lo, e.ci_hi,
                    bound - e.ci_hi, pass, std::move(note)};
        add(std::move(r));
    }

    static std::string append(std::string note, std::string_view extra) {
        if (!note.empty()) note += "; ";
        note += extra;
        return note;
    }

    void plot(const std::string& name, std::vector<std::string> columns, std::vector<double> row) {
        auto& t = report_.plotdata[name];
        if (t.columns.empty()) t.columns = std::move(columns);
        t.rows.push_back(std::move(row));
    }

    void note(std::string text) {
        if (std::find(report_.notes.begin(), report_.notes.end(), text) == report_.notes.end()) {
            report_.notes.push_back(std::move(text));
        }
    }

    void trace(std::string id, const std::vector<TracePoint>& points) {
        NamedTrace t{std::move(id), {}};
        for (const auto& p : points) {
            if (p.stage.rfind("grid", 0) != 0) t.points.push_back(p);
        }
        report_.traces.push_back(std::move(t));
    }

private:
    std::size_t scaled(double base) const {
        return std::max<std::size_t>(100, static_cast<std::size_t>(std::llround(base * opt_.budget_scale)));
    }

    const ValidateOptions& opt_;
    Report& report_;
    std::map<std::string, std::vector<double>> cache_;
};

// Samplers ------------------------------------------------------------------

std::vector<double> bm_statistic(std::size_t dim, double horizon, std::size_t steps, std::size_t count,
                                 std::uint64_t seed, unsigned workers,
                                 const std::function<double(const PiecewisePath&)>& stat) {
    BrownianConfig cfg;
    cfg.dim = dim;
    cfg.horizon = horizon;
    cfg.grid = uniform_grid(horizon, steps);
    cfg.seed = seed;
    std::vector<double> out(count);
    parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = stat(sample_bm(cfg, i));
    });
    return out;
}

std::vector<double> model_statistic(const ProcessModel& model, std::size_t count, std::uint64_t seed,
                                    unsigned workers, const std::function<double(const PiecewisePath&)>& stat) {
    std::vector<double> out(count);
    parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng(seed, i);
            out[i] = stat(simulate_partial_sum(model, rng));
        }
    });
    return out;
}

Interval tail_fraction(const std::vector<double>& values, double threshold, bool strict) {
    std::size_t hits = 0;
    for (double v : values) hits += (strict ? v > threshold : v >= threshold) ? 1 : 0;
    return from_proportion(wilson_interval(hits, values.size()));
}

ProcessModel rademacher(std::size_t n, double horizon = 1.0, double p = 4.0) {
    ProcessModel m;
    m.variant = IidPartialSum{Innovation::Rademacher, n, p, 5.0};
    m.horizon = horizon;
    return m;
}

/// P(sup_{[0,T]} |B| ≥ x) = 4 Σ_{k≥1} (-1)^{k+1} Φ̄((2k-1)x/√T), summed until terms vanish.
double abs_sup_tail(double x, double horizon) {
    if (x <= 0.0) return 1.0;
    const double r = x / std::sqrt(horizon);
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double term = 2.0 * std::erfc((2.0 * k - 1.0) * r / std::sqrt(2.0));
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-300 || (k > 1 && term < 1e-17 * std::abs(sum))) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

// Discrete-maximum continuity correction for a Brownian motion sampled with step Δ.
constexpr double kMaxShift = 0.5825971579390106;

// ---------------------------------------------------------------------------
// Suites

void suite_rates(Runner& R) {
    R.touch({"example_rate_params", "example_lipschitz_params", "c_eps_delta_T", "theorem_bound"});
    const auto ind3 = example_rate_params(3.0, 1.0, 1e6);
    const auto lip3 = example_lipschitz_params(3.0, 1e6);
    auto rational_row = [&](std::string id, std::string what, const std::optional<Rational>& got, Rational want) {
        const bool ok = got && *got == want;
        R.add({std::move(id), std::move(what), Tag::RateExample, RowKind::Exact, want.value(),
               got ? got->value() : std::nan(""), got ? got->value() : std::nan(""), got ? got->value() : std::nan(""),
               ok ? 0.0 : -1.0, ok, "exact rational " + (got ? got->str() : std::string("none")) + " vs " + want.str()});
    };
    rational_row("rates/indicator_exponent_p3", "indicator rate exponent, p = 3", ind3.exponent, Rational(1, 56));
    rational_row("rates/indicator_exponent_limit", "indicator rate exponent as p grows", ind3.exponent_limit,
                 Rational(1, 20));
    rational_row("rates/lipschitz_exponent_p3", "Lipschitz rate exponent, p = 3", lip3.exponent, Rational(1, 42));
    rational_row("rates/lipschitz_exponent_limit", "Lipschitz rate exponent as p grows", lip3.exponent_limit,
                 Rational(1, 18));

    // Log-slope of θ(n) and δ(n) reproduces the exponents.
    const auto ind_hi = example_rate_params(3.0, 1.0, 1e8);
    R.exact("rates/indicator_theta_slope", "log-slope of theta in n, p = 3", Tag::RateExample, 1.0 / 56.0,
            std::log(ind3.theta / ind_hi.theta) / std::log(100.0), 1e-9);
    const auto lip_hi = example_lipschitz_params(3.0, 1e8);
    R.exact("rates/lipschitz_delta_slope", "log-slope of delta in n, p = 3", Tag::RateExample, 1.0 / 42.0,
            std::log(lip3.delta / lip_hi.delta) / std::log(100.0), 1e-9);
    R.exact("rates/indicator_epsilon_p3", "closed-form epsilon, p = 3, n = 1e6", Tag::RateExample,
            std::pow(10.0, -12.0 / 14.0), ind3.epsilon, 1e-12);
    R.exact("rates/indicator_theta_p3", "closed-form theta, p = 3, n = 1e6", Tag::RateExample,
            std::pow(10.0, -1.5 / 14.0), ind3.theta, 1e-12);

    R.exact("rates/c_eps_delta_T_unit", "C(1,1,1)", Tag::SmoothingBound,
            1.0 + 1.0 + std::sqrt(2.0) + std::sqrt(50.0 / std::numbers::pi), c_eps_delta_T(1.0, 1.0, 1.0), 1e-12);

    // γ = δ√(10 log n) turns the Brownian term into 4 n⁻⁵.
    for (double n : {1e2, 1e4}) {
        TheoremInputs in;
        in.set = SetK(Functional::sup_indicator(1.0));
        const double delta = 0.3;
        const double gamma = delta * std::sqrt(10.0 * std::log(n));
        const auto b = theorem_bound(in, 0.5, delta, 0.1, gamma);
        R.exact("rates/bm_term_n" + num(n), "Brownian term at gamma = delta sqrt(10 log n)", Tag::RateExample,
                4.0 * std::pow(n, -5.0), b.bm, 1e-12);
    }

    for (double e = 2.0; e <= 8.0; e += 1.0) {
        const double n = std::pow(10.0, e);
        const auto r = example_rate_params(3.0, 1.0, n);
        const auto l = example_lipschitz_params(3.0, n);
        R.plot("rates", {"n", "epsilon", "delta", "theta", "gamma", "rate", "lipschitz_epsilon", "lipschitz_delta"},
               {n, r.epsilon, r.delta, r.theta, r.gamma, r.rate, l.epsilon, l.delta});
    }
}

void suite_gaussian(Runner& R) {
    R.touch({"sample_bm", "bm_supnorm_tail", "bm_max_cdf", "gaussian_regularization_tail", "abs_gaussian_moment",
             "sup_norm", "regularize"});
    R.note("Brownian paths are piecewise-linear interpolations of exact marginals on uniform grids; sup statistics "
           "are grid maxima");
    constexpr std::size_t kSteps = 2048;
    const std::size_t N = R.paths();
    const unsigned W = R.workers();

    // Sup-norm tail.
    for (const auto& [d, T] : std::array<std::pair<std::size_t, double>, 2>{{{1, 1.0}, {2, 2.0}}}) {
        const std::string label = "gaussian/supnorm/d" + std::to_string(d) + "/T" + num(T);
        for (double z : {0.5, 1.0, 1.5, 2.0}) {
            const double bound = bm_supnorm_tail(z, d, T);
            const std::string id = label + "/z" + num(z);
            R.dominate(id, "P(|B| >= z)", Tag::BrownianSupTail, bound,
                       [&, d = d, T = T](std::size_t count, std::uint64_t seed) {
                           const auto& v = R.sample(label, count, seed, [&](std::size_t c, std::uint64_t s) {
                               return bm_statistic(d, T, kSteps, c, s, W, [](const PiecewisePath& p) { return sup_norm(p); });
                           });
                           return tail_fraction(v, z, false);
                       },
                       N, {}, label);
            const auto& last = R.report().rows.back();
            R.plot("bm_sup_tail", {"dim", "horizon", "z", "bound", "empirical", "ci_lo", "ci_hi"},
                   {static_cast<double>(d), T, z, bound, last.empirical, last.ci_lo, last.ci_hi});
        }
    }

    // Reflection principle against grid maxima with the discrete-maximum shift.
    {
        const std::string label = "gaussian/max";
        const auto& v = R.sample(label, N, R.seed(label), [&](std::size_t c, std::uint64_t s) {
            return bm_statistic(1, 1.0, kSteps, c, s, W, [](const PiecewisePath& p) { return path_sup(p.view(), 0); });
        });
        const double shift = kMaxShift * std::sqrt(1.0 / kSteps);
        for (double y : {0.5, 1.0, 2.0}) {
            std::size_t below = 0;
            for (double m : v) below += m <= y - shift ? 1 : 0;
            const auto p = wilson_interval(below, v.size());
            R.agreement("gaussian/max_cdf/y" + num(y), "P(max B <= y)", Tag::BrownianSupTail, p.estimate,
                        p.std_error(), bm_max_cdf(y, 1.0), 0.0, "grid maximum shifted by 0.5826 sqrt(dt)");
        }
    }

    // E‖B‖ on [0, 1].
    {
        const std::string label = "gaussian/supnorm/d1/T1";
        const auto& v = R.sample(label, N, R.seed(label), [&](std::size_t c, std::uint64_t s) {
            return bm_statistic(1, 1.0, kSteps, c, s, W, [](const PiecewisePath& p) { return sup_norm(p); });
        });
        const auto s = summarize(v);
        const auto exact = expected_bm_supnorm(1);
        R.agreement("gaussian/expected_supnorm", "E|B| over [0,1]", Tag::LipschitzBound,
                    s.mean + kMaxShift * std::sqrt(1.0 / kSteps), s.std_error, exact.value, 0.0,
                    "grid mean plus discrete-maximum correction");
    }

    // Regularization tail.
    const GaussianKernel bm{1.0, 1.0};
    for (double eps : {0.01, 0.05}) {
        const std::string label = "gaussian/regdiff/eps" + num(eps);
        for (double lambda : {0.25, 0.5}) {
            const double bound = gaussian_regularization_tail(bm, 4.0, eps, lambda, 1.0);
            R.dominate(label + "/lambda" + num(lambda), "P(|B_eps - B| > lambda)", Tag::GaussianTail, bound,
                       [&](std::size_t count, std::uint64_t s) {
                           const auto& v = R.sample(label, count, s, [&](std::size_t c, std::uint64_t ss) {
                               return bm_statistic(1, 1.0, kSteps, c, ss, W, [eps](const PiecewisePath& p) {
                                   return regularize(p, eps).sup_difference();
                               });
                           });
                           return tail_fraction(v, lambda, true);
                       },
                       N, {}, label);
            const auto& last = R.report().rows.back();
            R.plot("gaussian_tails", {"epsilon", "threshold", "envelope", "empirical", "ci_lo", "ci_hi"},
                   {eps, lambda, bound, last.empirical, last.ci_lo, last.ci_hi});
        }
    }

    const double s2pi = std::sqrt(2.0 / std::numbers::pi);
    R.exact("gaussian/abs_moment_1", "E|G|", Tag::DerivativeBounds, s2pi, abs_gaussian_moment(1.0), 1e-14);
    R.exact("gaussian/abs_moment_2", "E|G|^2", Tag::DerivativeBounds, 1.0, abs_gaussian_moment(2.0), 1e-14);
    R.exact("gaussian/abs_moment_3", "E|G|^3", Tag::DerivativeBounds, 2.0 * s2pi, abs_gaussian_moment(3.0), 1e-14);
    R.exact("gaussian/abs_moment_4", "E|G|^4", Tag::DerivativeBounds, 3.0, abs_gaussian_moment(4.0), 1e-14);
}

void suite_tightness(Runner& R) {
    R.touch({"simulate_partial_sum", "iid_partial_sum_envelope", "empirical_mod_tail", "chaining_bound",
             "mixing_mod_bound", "modulus_of_continuity", "max_jump", "regularize", "sup_norm"});
    const unsigned W = R.workers();
    const std::size_t N = R.paths();

    // i.i.d. Rademacher partial sums, n = 1000.
    const auto model = rademacher(1000);
    for (const auto& [eps, theta] :
         std::array<std::pair<double, double>, 4>{{{0.05, 0.75}, {0.05, 1.0}, {0.1, 0.75}, {0.02, 1.0}}}) {
        const std::string label = "tightness/iid/eps" + num(eps);
        const double bound = iid_partial_sum_envelope(4.0, 1.0, 1000.0, eps, theta, 1.0);
        R.dominate(label + "/theta" + num(theta), "P(|X_eps - X| >= theta), Rademacher n = 1000",
                   Tag::ChainingLemma, bound,
                   [&](std::size_t count, std::uint64_t s) {
                       const auto& v = R.sample(label, count, s, [&](std::size_t c, std::uint64_t ss) {
                           return model_statistic(model, c, ss, W, [eps](const PiecewisePath& p) {
                               return regularize(p, eps).sup_difference();
                           });
                       });
                       return tail_fraction(v, theta, false);
                   },
                   N, "p = 4, E|W|^4 = 1", label);
        const auto& last = R.report().rows.back();
        R.plot("iid_tails", {"epsilon", "threshold", "envelope", "empirical", "ci_lo", "ci_hi"},
               {eps, theta, bound, last.empirical, last.ci_lo, last.ci_hi});
    }

    // The packaged estimator on explicit path objects.
    {
        const std::size_t count = std::min<std::size_t>(N, 2000);
        std::vector<PiecewisePath> paths;
        paths.reserve(count);
        const std::uint64_t s = R.seed("tightness/explicit");
        for (std::size_t i = 0; i < count; ++i) {
            Rng rng(s, i);
            paths.push_back(simulate_partial_sum(model, rng));
        }
        const auto est = empirical_mod_tail(paths, 0.05, 0.75, W);
        const double bound = iid_partial_sum_envelope(4.0, 1.0, 1000.0, 0.05, 0.75, 1.0);
        R.add({"tightness/iid/explicit_paths", "P(|X_eps - X| >= theta) from path objects", Tag::ChainingLemma,
               RowKind::Domination, bound, est.estimate, est.ci_lo, est.ci_hi, bound - est.ci_hi, bound >= est.ci_hi,
               bound > 1.0 ? "vacuous" : ""});

        // Path-level identities on the same sample.
        double worst_mod = -std::numeric_limits<double>::infinity();
        double worst_grad = -std::numeric_limits<double>::infinity();
        double worst_jump = 0.0;
        const double step = 1.0 / std::sqrt(1000.0);
        for (std::size_t i = 0; i < std::min<std::size_t>(count, 200); ++i) {
            const auto rp = regularize(paths[i], 0.05);
            worst_mod = std::max(worst_mod, rp.sup_difference() - modulus_of_continuity(paths[i], 0.05));
            worst_grad = std::max(worst_grad, rp.sup_gradient() - sup_norm(paths[i]) / 0.05);
            worst_jump = std::max(worst_jump, std::abs(max_jump(paths[i]) - step));
        }
        R.consistency("tightness/modulus_dominates_difference", "max of |w_eps - w| - modulus(eps)",
                      Tag::PathRegularization, 0.0, worst_mod, "200 Rademacher paths, eps = 0.05");
        R.consistency("tightness/gradient_bound", "max of sup|grad w_eps| - |w|/eps", Tag::PathRegularization, 0.0,
                      worst_grad, "200 Rademacher paths, eps = 0.05");
        R.exact("tightness/max_jump", "largest jump of a Rademacher walk", Tag::ChainingLemma, 0.0, worst_jump, 1e-15,
                "equals n^{-1/2}");
    }

    // Dimension reduction of the chaining bound.
    {
        const ChentsovCondition cond{3.0, 2.0, 4.0, Validity::AllScales, ConditionForm::SingleIncrement};
        const double one = chaining_bound(cond, std::nullopt, 1.0, 0.05, 0.5, 1.0, 1);
        const double two = chaining_bound(cond, std::nullopt, 1.0, 0.05, 0.5, 1.0, 2);
        R.exact("tightness/dimension_reduction", "chaining bound in d = 2 over d = 1", Tag::ChainingLemma, 2.0,
                two / one, 1e-14);
        const ChentsovCondition restricted{3.0, 2.0, 4.0, Validity::Restricted, ConditionForm::MinOfTwo};
        const double with_phi =
            chaining_bound(restricted, DiscreteTail::power_law(1.0, 4.0, 1000.0), 1000.0, 0.05, 0.5, 1.0, 1);
        R.consistency("tightness/phi_term_nonnegative", "single-increment bound minus min-of-two bound",
                      Tag::ChainingLemma, 0.0, one - with_phi);
    }

    // Mixing autoregression.
    {
        ProcessModel ar;
        ar.variant = MixingSum{0.5, 1000, MixingModel{4.0, 0.0, 1.0, 3.0}};
        const auto env = ar.envelope();
        const double eps = 0.05;
        const std::string label = "tightness/mixing/eps" + num(eps);
        for (double theta : {0.75, 1.5, 3.0}) {
            const double bound = env.unclamped(eps, theta);
            R.dominate(label + "/theta" + num(theta), "P(|Y_eps - Y| >= theta), AR(1) rho = 0.5, n = 1000",
                       Tag::MixingLemma, bound,
                       [&](std::size_t count, std::uint64_t s) {
                           const auto& v = R.sample(label, count, s, [&](std::size_t c, std::uint64_t ss) {
                               return model_statistic(ar, c, ss, W, [eps](const PiecewisePath& p) {
                                   return regularize(p, eps).sup_difference();
                               });
                           });
                           return tail_fraction(v, theta, false);
                       },
                       N, "mixing certificate k = 1, b = 3 supplied by configuration", label);
        }
        R.note("the mixing certificate (k, b) of the autoregression is an input, not derived");
    }

    // Unit variance of X_n(T) for every innovation law.
    for (Innovation d : {Innovation::Rademacher, Innovation::Uniform, Innovation::Exponential, Innovation::StudentT}) {
        ProcessModel m;
        m.variant = IidPartialSum{d, 100, 4.0, 6.0};
        const std::string label = "tightness/variance/" + std::string(to_string(d));
        const auto v = model_statistic(m, R.scalar(), R.seed(label), W, [](const PiecewisePath& p) {
            return p.eval_coord(1.0);
        });
        const auto s = summarize(v);
        double m4 = 0.0;
        for (double x : v) m4 += std::pow(x - s.mean, 4);
        m4 /= static_cast<double>(v.size());
        const double var = s.std_dev * s.std_dev;
        const double se = std::sqrt(std::max(0.0, m4 - var * var) / static_cast<double>(v.size()));
        R.agreement(label, "Var X_n(T), n = 100", Tag::Plumbing, var, se, 1.0, 0.0);
    }
    R.touch({"eval"});
}

// Brute-force oracle: all set partitions (restricted growth strings) with blocks of size ≤ 2.
std::size_t brute_force_p2_count(int n) {
    if (n == 0) return 1;
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::size_t count = 0;
    while (true) {
        std::vector<int> sizes(static_cast<std::size_t>(n), 0);
        bool ok = true;
        for (int v : a) ok = ok && ++sizes[static_cast<std::size_t>(v)] <= 2;
        count += ok ? 1 : 0;
        int i = n - 1;
        for (; i > 0; --i) {
            const int mx = *std::max_element(a.begin(), a.begin() + i);
            if (a[static_cast<std::size_t>(i)] <= mx) {
                ++a[static_cast<std::size_t>(i)];
                std::fill(a.begin() + i + 1, a.end(), 0);
                break;
            }
        }
        if (i == 0) break;
    }
    return count;
}

void suite_smoothing(Runner& R) {
    R.touch({"validate_smoothing", "enumerate_p2_partitions", "smooth_eval", "derivative_estimate",
             "d2_covariance_estimate", "m0_norm_bound", "m0c_constant", "grad_energy", "eval_functional", "regularize"});
    const std::size_t M = R.scalar();

    for (int n = 0; n <= 5; ++n) {
        const auto count = static_cast<double>(enumerate_p2_partitions(n).size());
        R.exact("smoothing/partitions_n" + std::to_string(n), "partitions with blocks of size <= 2",
                Tag::PartitionCount, static_cast<double>(brute_force_p2_count(n)), count, 0.0);
    }

    // Smooth cylinder with closed-form smoothing: Φ((a·(w_ε + δB)(t) - c)/s) averages to Φ((m - c)/σ).
    SmoothingParams sp{0.2, 0.5, 1.0, 1};
    const auto h = Functional::smooth_cylinder({0.5, 0.9}, {{1.0}, {1.0}}, 0.3, 0.5);
    const auto w = PiecewisePath::scalar({0.0, 0.4}, {0.0, 0.3}, 1.0, Interpolation::Step);
    const auto x = PiecewisePath::indicator(0.3, 1.0);
    const auto y = PiecewisePath::indicator_difference(0.3, 0.7, 1.0);
    {
        const auto rw = regularize(w, 0.2);
        R.exact("smoothing/regularized_base", "w_eps(0.5) + w_eps(0.9)", Tag::PathRegularization, 0.525,
                rw.value(0.5)[0] + rw.value(0.9)[0], 1e-14, "hand-computed window averages");
    }
    const double m = 0.525, c = 0.3;
    const double sigma = std::sqrt(0.25 + 0.25 * 2.4);
    const double z = (m - c) / sigma;
    const double ax = 2.0, ay = 1.0; // a·x_ε and a·y_ε at the evaluation times
    const double exact0 = normal_cdf(z);
    const double exact1 = normal_pdf(z) / sigma * ax;
    const double exact2 = -z * normal_pdf(z) / (sigma * sigma) * ax * ay;
    R.note("smooth-cylinder checks use w = 0.3 I_0.4, a = (1, 1) at times (0.5, 0.9), offset 0.3, scale 0.5");

    const auto e0 = smooth_eval(h, w, sp, R.mc("smoothing/cyl0", M));
    R.agreement("smoothing/cylinder_value", "h_{eps,delta}(w), smooth cylinder", Tag::DerivativeFormula, e0.estimate,
                e0.std_error, exact0, 0.0, "closed-form Gaussian average");
    const std::vector<PiecewisePath> d1{x}, d2{x, y};
    const auto g1 = derivative_estimate(h, w, d1, sp, R.mc("smoothing/cyl1", M));
    const auto g2 = derivative_estimate(h, w, d2, sp, R.mc("smoothing/cyl2", M));
    R.agreement("smoothing/cylinder_d1_exact", "D h_{eps,delta}(w)[I_0.3]", Tag::DerivativeFormula, g1.estimate,
                g1.std_error, exact1, 0.0, "closed form");
    R.agreement("smoothing/cylinder_d2_exact", "D^2 h_{eps,delta}(w)[I_0.3, I_0.3 - I_0.7]", Tag::DerivativeFormula,
                g2.estimate, g2.std_error, exact2, 0.0, "closed form");
    const auto f1 = finite_difference_estimate(h, w, d1, sp, R.mc("smoothing/fd1", M));
    const auto f2 = finite_difference_estimate(h, w, d2, sp, R.mc("smoothing/fd2", M));
    R.agreement("smoothing/girsanov_vs_fd_n1", "first derivative, change of measure vs finite difference",
                Tag::DerivativeFormula, g1.estimate, g1.std_error, f1.estimate, f1.std_error);
    R.agreement("smoothing/girsanov_vs_fd_n2", "second derivative, change of measure vs finite difference",
                Tag::DerivativeFormula, g2.estimate, g2.std_error, f2.estimate, f2.std_error);
    const auto cv = d2_covariance_estimate(h, w, x, y, sp, R.mc("smoothing/cov", M));
    R.agreement("smoothing/covariance_vs_partition", "second derivative, covariance vs partition form",
                Tag::DerivativeFormula, cv.estimate, cv.std_error, g2.estimate, g2.std_error);

    // Constant functional: derivatives vanish.
    {
        const auto one = Functional::constant(1.0);
        const auto v = smooth_eval(one, w, sp, R.mc("smoothing/const0", M));
        R.exact("smoothing/constant_value", "h = 1 smooths to 1", Tag::DerivativeFormula, 1.0, v.estimate, 0.0);
        const auto c1 = derivative_estimate(one, w, d1, sp, R.mc("smoothing/const1", M));
        const auto c2 = derivative_estimate(one, w, d2, sp, R.mc("smoothing/const2", M));
        const auto cc = d2_covariance_estimate(one, w, x, y, sp, R.mc("smoothing/constcov", M));
        R.agreement("smoothing/constant_d1", "D of a constant", Tag::DerivativeFormula, c1.estimate, c1.std_error, 0.0,
                    0.0);
        R.agreement("smoothing/constant_d2", "D^2 of a constant", Tag::DerivativeFormula, c2.estimate, c2.std_error,
                    0.0, 0.0);
        R.agreement("smoothing/constant_cov", "covariance form of a constant", Tag::DerivativeFormula, cc.estimate,
                    cc.std_error, 0.0, 0.0);
    }

    // Second-derivative smoothness envelope on a 12-point grid.
    const auto sup = Functional::sup_indicator(0.5);
    const auto zero = PiecewisePath::constant(0.0, 1.0);
    const std::array<std::array<double, 5>, 12> grid{{{0.3, 0.4, 0.6, 0.2, 0.5},
                                                      {0.5, 0.3, 0.35, 0.2, 0.5},
                                                      {0.7, 0.3, 0.9, 0.3, 0.5},
                                                      {0.3, 0.5, 0.55, 0.2, 0.3},
                                                      {0.4, 0.25, 0.75, 0.2, 0.3},
                                                      {0.6, 0.6, 0.65, 0.3, 0.3},
                                                      {0.3, 0.3, 0.31, 0.2, 0.4},
                                                      {0.5, 0.5, 0.9, 0.25, 0.4},
                                                      {0.35, 0.4, 0.45, 0.3, 0.4},
                                                      {0.8, 0.2, 0.5, 0.2, 0.6},
                                                      {0.25, 0.7, 0.95, 0.25, 0.6},
                                                      {0.45, 0.45, 0.7, 0.3, 0.6}}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto [r, s, t, eps, delta] = grid[i];
        const SmoothingParams p{eps, delta, 1.0, 1};
        const auto xr = PiecewisePath::indicator(r, 1.0);
        const auto yst = PiecewisePath::indicator_difference(s, t, 1.0);
        const auto est = d2_covariance_estimate(sup, zero, xr, yst, p, R.mc("smoothing/envelope/" + std::to_string(i), M));
        const double bound = m0c_constant(p, {SmoothnessCertificate::Kind::Bounded, 1.0}) * std::sqrt(t - s);
        R.envelope("smoothing/second_derivative_envelope/" + std::to_string(i), "|D^2 h[I_r, I_s - I_t]|",
                   Tag::SecondDerivativeSmoothness, bound, est.estimate, est.std_error,
                   "r=" + num(r) + " s=" + num(s) + " t=" + num(t) + " eps=" + num(eps) + " delta=" + num(delta));
        R.plot("second_derivative_envelope", {"r", "s", "t", "epsilon", "delta", "bound", "estimate", "std_error"},
               {r, s, t, eps, delta, bound, est.estimate, est.std_error});
    }

    // Derivative norm envelopes for an indicator (sup|h| = 1) and unit-norm directions.
    {
        const SmoothingParams p{0.3, 0.5, 1.0, 1};
        std::vector<PiecewisePath> dirs;
        for (int k = 1; k <= 3; ++k) {
            dirs.push_back(PiecewisePath::indicator(0.3 + 0.1 * (k - 1), 1.0));
            const auto est = derivative_estimate(sup, zero, dirs, p, R.mc("smoothing/dnorm/" + std::to_string(k), M));
            R.envelope("smoothing/derivative_norm_k" + std::to_string(k), "|D^k h_{eps,delta}| for unit directions",
                       Tag::DerivativeBounds, derivative_norm_bound(p, 1.0, k), est.estimate, est.std_error);
        }
        const auto zx = PiecewisePath::indicator(0.3, 1.0);
        const auto xx = PiecewisePath::indicator_difference(0.4, 0.6, 1.0);
        const double energy = grad_energy(xx, p.epsilon);
        R.exact("smoothing/energy_closed_form", "grad energy of I_0.4 - I_0.6", Tag::PathRegularization,
                indicator_difference_energy(0.4, 0.6, 1.0, p.epsilon), energy, 1e-12);
        const auto est = d2_covariance_estimate(sup, zero, zx, xx, p, R.mc("smoothing/energy", M));
        R.envelope("smoothing/second_derivative_energy", "|D^2 h[z, x]| against the energy envelope",
                   Tag::DerivativeBounds, d2_energy_bound(p, 1.0, 1.0, energy), est.estimate, est.std_error);
        const auto clamp = Functional::clamped_sup_lipschitz(0.5, 1.0);
        const auto le = d2_covariance_estimate(clamp, zero, zx, xx, p, R.mc("smoothing/lipenergy", M));
        R.envelope("smoothing/lipschitz_energy", "|D^2 h[z, x]|, Lipschitz h, energy envelope", Tag::DerivativeBounds,
                   d2_energy_lipschitz_bound(p, 1.0, 1.0, energy), le.estimate, le.std_error);
        R.envelope("smoothing/lipschitz_second_derivative", "|D^2 h[z, x]|, Lipschitz h", Tag::DerivativeBounds,
                   lipschitz_derivative_bound(p, 1.0, 1, 1), le.estimate, le.std_error);
        R.consistency("smoothing/lipschitz_m0_covers_third", "third-derivative constant within the M0 envelope",
                      Tag::DerivativeBounds, lipschitz_m0_bound(p), lipschitz_derivative_bound(p, 1.0, 1, 2));
        const auto val = smooth_eval(sup, zero, p, R.mc("smoothing/m0", M));
        R.consistency("smoothing/m0_norm_value", "|h_{eps,delta}| within the M0 norm bound", Tag::SmoothingBound,
                      m0_norm_bound(p, 1.0), std::abs(val.estimate));
    }
}

TheoremInputs indicator_inputs(const ProcessModel& model, const SetK& K) {
    TheoremInputs in;
    in.kappa1 = in.kappa2 = order_only_kappa(1.0, model.horizon, static_cast<double>(model.n()));
    in.kappa_order_only = true;
    in.horizon = model.horizon;
    in.x_tail = model.envelope();
    in.z_tail = TailEnvelope::gaussian({1.0, 1.0}, 4.0, model.horizon);
    in.set = K;
    return in;
}

void suite_theorem(Runner& R) {
    R.touch({"validate_theorem", "estimate_set_discrepancy", "simulate_partial_sum", "theorem_bound", "lp_bound",
             "lipschitz_bound", "optimize_bound", "enlarge", "boundary_enlargement_bound", "bm_max_cdf",
             "example_rate_params", "empirical_mod_tail", "eval_functional", "sample_bm", "bm_supnorm_tail",
             "gaussian_regularization_tail", "iid_partial_sum_envelope", "chaining_bound", "sup_norm"});
    R.note("kappa constants use the order-only default c T n^{-1/2} with c = 1");
    const unsigned W = R.workers();
    const SetK K(Functional::sup_indicator(1.0));
    const double T = 1.0;

    std::optional<BoundBreakdown> previous;
    std::map<std::size_t, double> totals;
    std::map<std::size_t, DiscrepancyEstimate> disc;
    BoundBreakdown best_large;
    for (std::size_t n : {std::size_t{100}, std::size_t{1000}, std::size_t{10000}}) {
        const auto model = rademacher(n, T);
        const std::string tag = "n" + std::to_string(n);
        disc[n] = estimate_set_discrepancy(model, K, R.mc("theorem/discrepancy/" + tag, R.scalar()));
        if (n == 1000) continue;
        const auto in = indicator_inputs(model, K);
        OptimizeOptions opts;
        opts.workers = W;
        if (previous) opts.extra_candidates.push_back(*previous);
        const auto res = optimize_bound(in, Objective::Indicator, SearchBox{}, opts);
        R.trace("theorem/indicator/" + tag, res.trace);
        previous = res.best;
        totals[n] = res.best.total;
        best_large = res.best;
        const auto& d = disc[n];
        ReportRow row{"theorem/indicator/" + tag, "|P(X_n in K) - P(Z in K)|, K = {sup <= 1}", Tag::SmoothingBound,
                      RowKind::Domination, res.best.total, d.discrepancy, d.ci_lo, d.ci_hi,
                      res.best.total - d.ci_hi, res.best.total >= d.ci_hi,
                      "order-only kappa; eps=" + num(res.best.epsilon) + " delta=" + num(res.best.delta) +
                          " theta=" + num(res.best.theta) + " gamma=" + num(res.best.gamma)};
        if (res.best.total > 1.0) row.note += "; vacuous";
        R.add(std::move(row));
        R.plot("theorem", {"n", "bound", "stein", "smoothness", "x_tail", "z_tail", "bm", "boundary", "discrepancy",
                           "ci_lo", "ci_hi"},
               {static_cast<double>(n), res.best.total, res.best.stein, res.best.smoothness, res.best.x_tail,
                res.best.z_tail, res.best.bm, res.best.boundary, d.discrepancy, d.ci_lo, d.ci_hi});
    }
    R.consistency("theorem/monotone_in_n", "optimized bound at n = 1e4 vs n = 1e2", Tag::SmoothingBound,
                  totals.at(100), totals.at(10000));
    R.consistency("theorem/discrepancy_trend", "lower CI at n = 1e4 vs upper CI at n = 1e2", Tag::Plumbing,
                  disc.at(100).ci_hi, disc.at(10000).ci_lo,
                  "point estimates " + num(disc.at(100).discrepancy) + ", " + num(disc.at(1000).discrepancy) + ", " +
                      num(disc.at(10000).discrepancy));

    // Closed-form parameters evaluated directly and through the optimizer trace.
    {
        const std::size_t n = 10000;
        const auto model = rademacher(n, T);
        const auto in = indicator_inputs(model, K);
        const auto rp = example_rate_params(4.0, T, static_cast<double>(n));
        BoundBreakdown cand;
        cand.epsilon = rp.epsilon;
        cand.delta = rp.delta;
        cand.theta = rp.theta;
        cand.gamma = rp.gamma;
        OptimizeOptions opts;
        opts.workers = W;
        opts.rounds = 0;
        opts.extra_candidates = {cand};
        const auto res = optimize_bound(in, Objective::Indicator, SearchBox{}, opts);
        const auto direct = theorem_bound(in, rp.epsilon, rp.delta, rp.theta, rp.gamma);
        double traced = std::nan("");
        for (const auto& p : res.trace) {
            if (p.stage == "candidate") traced = p.objective;
        }
        R.exact("theorem/closed_form_params", "bound at closed-form parameters, direct vs optimizer trace",
                Tag::RateExample, direct.total, traced, 0.0, "p = 4, n = 1e4");
        R.consistency("theorem/optimizer_beats_closed_form", "optimized bound vs closed-form parameters",
                      Tag::RateExample, direct.total, res.best.total);
    }

    // Each additive term against its own empirical counterpart at the n = 1e4 optimum.
    {
        const std::size_t n = 10000;
        const auto model = rademacher(n, T);
        const auto in = indicator_inputs(model, K);
        const auto& b = best_large;
        const std::size_t P = R.paths(0.1);
        R.dominate("theorem/term/x_tail", "P(|X_eps - X| >= theta) at the optimum", Tag::ChainingLemma, b.x_tail,
                   [&](std::size_t count, std::uint64_t s) {
                       std::vector<PiecewisePath> paths;
                       paths.reserve(count);
                       for (std::size_t i = 0; i < count; ++i) {
                           Rng rng(s, i);
                           paths.push_back(simulate_partial_sum(model, rng));
                       }
                       return from_proportion(empirical_mod_tail(paths, b.epsilon, b.theta, W));
                   },
                   P);
        const std::size_t steps = std::max<std::size_t>(1024, static_cast<std::size_t>(std::ceil(8.0 / b.epsilon)));
        R.dominate("theorem/term/z_tail", "P(|Z_eps - Z| > theta) at the optimum", Tag::GaussianTail, b.z_tail,
                   [&](std::size_t count, std::uint64_t s) {
                       const auto v = bm_statistic(1, T, steps, count, s, W, [&](const PiecewisePath& p) {
                           return regularize(p, b.epsilon).sup_difference();
                       });
                       return tail_fraction(v, b.theta, true);
                   },
                   P);
        // Below Monte-Carlo resolution at the optimum: compare with the exact series there,
        // and sample at the γ where the term equals 0.2.
        R.consistency("theorem/term/bm", "P(delta |B| >= gamma) at the optimum, exact series", Tag::BrownianSupTail,
                      b.bm, abs_sup_tail(b.gamma / b.delta, T));
        const double gamma_r = b.delta * std::sqrt(2.0 * T * std::log(4.0 / 0.2));
        const double bm_r = theorem_bound(in, b.epsilon, b.delta, b.theta, gamma_r).bm;
        R.dominate("theorem/term/bm_resolved", "P(delta |B| >= gamma) where the term is 0.2", Tag::BrownianSupTail,
                   bm_r,
                   [&](std::size_t count, std::uint64_t s) {
                       const auto v = bm_statistic(1, T, 2048, count, s, W,
                                                   [&](const PiecewisePath& p) { return b.delta * sup_norm(p); });
                       return tail_fraction(v, gamma_r, false);
                   },
                   R.paths(), "gamma=" + num(gamma_r) + "; grid maxima");
        R.consistency("theorem/term/bm_resolved_exact", "P(delta |B| >= gamma) where the term is 0.2, exact series",
                      Tag::BrownianSupTail, bm_r, abs_sup_tail(gamma_r / b.delta, T));
        // Exact enlargement band probabilities for the Brownian target.
        for (double th : {0.05, 0.2, 0.5, 2.0 * (b.theta + b.gamma)}) {
            const auto e = enlarge(K, th);
            const double band = *exact_bm_probability(e.outer, T) - *exact_bm_probability(e.inner, T);
            R.consistency("theorem/boundary_band/theta" + num(th), "P(Z in K^theta \\ K^-theta)",
                          Tag::BoundaryEnlargement, boundary_enlargement_bound(K, th, T), band);
        }
    }

    // Lévy–Prokhorov and Lipschitz bounds at n = 1e4 against the running maxima of X_n.
    {
        const std::size_t n = 10000;
        const auto model = rademacher(n, T);
        auto in = indicator_inputs(model, K);
        OptimizeOptions opts;
        opts.workers = W;
        const auto lp = optimize_bound(in, Objective::LevyProkhorov, SearchBox{}, opts);
        R.trace("theorem/lp/n10000", lp.trace);
        const double rho = lp.best.objective;
        const std::string label = "theorem/maxima/n10000";
        const auto& maxima = R.sample(label, R.scalar(), R.seed(label), [&](std::size_t c, std::uint64_t s) {
            return model_statistic(model, c, s, W, [](const PiecewisePath& p) { return path_sup(p.view(), 0); });
        });
        std::size_t in_k = 0, in_rho = 0;
        for (double mx : maxima) {
            in_k += mx <= 1.0 ? 1 : 0;
            in_rho += mx < 1.0 + rho ? 1 : 0;
        }
        const auto pk = wilson_interval(in_k, maxima.size());
        const auto pr = wilson_interval(in_rho, maxima.size());
        // P(X ∈ K) - P(Z ∈ K^ρ) and P(Z ∈ K) - P(X ∈ K^ρ).
        const double zr = bm_max_cdf(1.0 + rho, T), zk = bm_max_cdf(1.0, T);
        const double e1 = pk.estimate - zr, e2 = zk - pr.estimate;
        const double hi = std::max(pk.ci_hi - zr, zk - pr.ci_lo);
        const double lo = std::max(pk.ci_lo - zr, zk - pr.ci_hi);
        R.add({"theorem/levy_prokhorov/n10000", "max one-sided K vs K^rho excess at rho = LP bound",
               Tag::LevyProkhorovBound, RowKind::Domination, rho, std::max(e1, e2), lo, hi, rho - hi, rho >= hi,
               rho > 1.0 ? "vacuous" : ""});

        in.x_mean = mean_envelope_from_tail(in.x_tail);
        in.z_mean = mean_envelope_from_tail(in.z_tail);
        in.bm_sup_mean = expected_bm_supnorm(1).value;
        const auto lip = optimize_bound(in, Objective::Lipschitz, SearchBox{}, opts);
        R.trace("theorem/lipschitz/n10000", lip.trace);
        R.touch({"lipschitz_bound"});
        const double lb = lipschitz_bound(in, lip.best.epsilon, lip.best.delta);
        std::vector<double> hx(maxima.size());
        for (std::size_t i = 0; i < maxima.size(); ++i) hx[i] = std::clamp(maxima[i] - 0.5, 0.0, 1.0);
        const auto sx = summarize(hx);
        // E clamp(M - 0.5, 0, 1) = ∫_{0.5}^{1.5} P(M > m) dm for the Brownian maximum M.
        const double ez = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double mm) { return 1.0 - bm_max_cdf(mm, T); }, 0.5, 1.5);
        const double diff = std::abs(sx.mean - ez);
        R.add({"theorem/lipschitz/n10000", "|E h(X_n) - E h(Z)|, h = clamp(sup - 0.5, 0, 1)", Tag::LipschitzBound,
               RowKind::Domination, lb, diff, std::max(0.0, diff - kZ95 * sx.std_error), diff + kZ95 * sx.std_error,
               lb - (diff + kZ95 * sx.std_error), lb >= diff + kZ95 * sx.std_error,
               std::string(lb > 1.0 ? "vacuous; " : "") + "eps=" + num(lip.best.epsilon) + " delta=" +
                   num(lip.best.delta)});
    }
}

void coverage_row(Runner& R) {
    std::string missing;
    for (const auto& op : required_operations()) {
        if (!R.report().exercised.count(op)) missing += (missing.empty() ? "" : " ") + op;
    }
    const double total = static_cast<double>(required_operations().size());
    const double seen = total - static_cast<double>(std::count(missing.begin(), missing.end(), ' ') +
                                                    (missing.empty() ? 0 : 1));
    R.exact("all/coverage", "operations exercised by the full suite", Tag::Plumbing, total, seen, 0.0,
            missing.empty() ? "complete" : "missing: " + missing);
}

} // namespace

Report run_validation(const ValidateOptions& options) {
    require(options.budget_scale > 0.0 && std::isfinite(options.budget_scale), ErrorKind::Config,
            "budget scale must be positive");
    Report report;
    report.suite = std::string(to_string(options.suite));
    report.seed = options.seed;
    report.budget_scale = options.budget_scale;
    Runner R(options, report);
    const bool all = options.suite == Suite::All;
    if (all || options.suite == Suite::Rates) suite_rates(R);
    if (all || options.suite == Suite::Gaussian) suite_gaussian(R);
    if (all || options.suite == Suite::Tightness) suite_tightness(R);
    if (all || options.suite == Suite::Smoothing) suite_smoothing(R);
    if (all || options.suite == Suite::Theorem) suite_theorem(R);
    if (all) coverage_row(R);
    return report;
}

} // namespace gsmooth
