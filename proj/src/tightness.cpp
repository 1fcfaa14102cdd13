#include "gsmooth/tightness.hpp"

#include "gsmooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string range_text(double lo, double hi, bool hi_inclusive) {
    std::ostringstream os;
    os << "(" << lo << ", " << hi << (hi_inclusive ? "]" : ")");
    return os.str();
}

} // namespace

// ---------------------------------------------------------------------------
// DiscreteTail

DiscreteTail DiscreteTail::power_law(double c, double p, double n) {
    require(c >= 0.0 && p > 0.0 && n >= 1.0, ErrorKind::ParameterDomain, "power-law tail needs c >= 0, p > 0, n >= 1");
    DiscreteTail t;
    t.kind = Kind::PowerLaw;
    t.c = c;
    t.p = p;
    t.n = n;
    return t;
}

DiscreteTail DiscreteTail::jump(double c, double p, double n) {
    DiscreteTail t = power_law(c, p, n);
    t.kind = Kind::Jump;
    return t;
}

DiscreteTail DiscreteTail::tabulated(std::vector<std::pair<double, double>> table) {
    require(!table.empty(), ErrorKind::MissingInput, "empty tail table");
    std::sort(table.begin(), table.end());
    for (std::size_t i = 0; i < table.size(); ++i) {
        require(table[i].second >= 0.0, ErrorKind::ParameterDomain, "tail values must be nonnegative");
        if (i > 0) {
            require(table[i].second <= table[i - 1].second, ErrorKind::ParameterDomain,
                    "tabulated tail must be nonincreasing");
        }
    }
    DiscreteTail t;
    t.kind = Kind::Tabulated;
    t.table = std::move(table);
    return t;
}

double DiscreteTail::operator()(double eta) const {
    if (kind == Kind::Tabulated) {
        // Step envelope: value at the largest tabulated η not above the query.
        const auto it = std::upper_bound(table.begin(), table.end(), eta,
                                         [](double x, const auto& row) { return x < row.first; });
        if (it == table.begin()) return kInf;
        return std::prev(it)->second;
    }
    if (eta <= 0.0) return kInf;
    return c * std::pow(n, 1.0 - p / 2.0) * std::pow(eta, -p);
}

// ---------------------------------------------------------------------------
// Chaining

double chaining_psi(double beta, double gamma) {
    return std::pow(2.0, -(beta - 1.0) / (2.0 * gamma));
}

double chaining_series_constant(double beta, double gamma, double psi) {
    require(psi > 0.0 && psi < 1.0, ErrorKind::ParameterDomain, "psi must lie in (0, 1)");
    const double ratio = std::pow(2.0, beta - 1.0) * std::pow(psi, gamma);
    require(ratio > 1.0, ErrorKind::DivergentConstant, "chaining series diverges: 2^{beta-1} psi^gamma <= 1");
    return std::pow(9.0 / (1.0 - psi), gamma) * std::pow(2.0, beta) / (ratio - 1.0);
}

double chaining_constant(const ChentsovCondition& cond, double epsilon, double horizon,
                         std::optional<double> psi) {
    require(cond.K > 0.0 && cond.gamma > 0.0, ErrorKind::ParameterDomain, "condition needs K, gamma > 0");
    require(cond.beta > 1.0, ErrorKind::DivergentConstant, "chaining needs beta > 1");
    const double q = psi.value_or(chaining_psi(cond.beta, cond.gamma));
    // ⌈T/ε⌉ ≤ (T/ε)(1 + ε/T) blocks of length ε.
    return cond.K * chaining_series_constant(cond.beta, cond.gamma, q) * (1.0 + epsilon / horizon);
}

double chaining_bound(const ChentsovCondition& cond, const std::optional<DiscreteTail>& phi,
                      double n, double epsilon, double lambda, double horizon, std::size_t dim) {
    require(horizon > 0.0 && dim >= 1, ErrorKind::ParameterDomain, "need T > 0 and d >= 1");
    require(lambda > 0.0, ErrorKind::ParameterDomain, "lambda must be positive");
    if (cond.validity == Validity::Restricted) {
        require(n >= 1.0 && epsilon > 1.0 / n && epsilon < 1.0, ErrorKind::ParameterDomain,
                "epsilon must lie in " + range_text(1.0 / n, 1.0, false) + " for restricted validity");
    } else {
        require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::ParameterDomain, "epsilon must lie in (0, 1)");
    }
    const double psi = chaining_psi(cond.beta, cond.gamma);
    const double cprime = chaining_constant(cond, epsilon, horizon, psi);
    double inner = cprime * std::pow(epsilon, cond.beta - 1.0) / std::pow(lambda, cond.gamma);
    const bool drop_phi = cond.form == ConditionForm::SingleIncrement && cond.validity == Validity::AllScales;
    if (!drop_phi) {
        require(phi.has_value(), ErrorKind::MissingInput,
                "this condition needs a short-scale tail (per-block or jump form)");
        require(!(cond.validity == Validity::Restricted && phi->kind == DiscreteTail::Kind::Jump),
                ErrorKind::ParameterDomain, "the jump-tail form needs a condition valid at all scales");
        inner += 2.0 * (*phi)(lambda * (1.0 - psi) / 18.0);
    }
    return static_cast<double>(dim) * horizon * inner;
}

// ---------------------------------------------------------------------------
// Mixing sums

namespace {

void check_mixing(const MixingModel& m) {
    require(m.p > 2.0, ErrorKind::UnsupportedMoment, "mixing bound needs p > 2");
    require(m.c_p > 0.0 && m.k > 0.0, ErrorKind::ParameterDomain, "mixing model needs c_p, k > 0");
    require(m.b > m.p / (m.p - 2.0), ErrorKind::InvalidMixingRate, "mixing rate must satisfy b > p/(p-2)");
}

} // namespace

double mixing_covariance_constant(const MixingModel& model) {
    check_mixing(model);
    const double q = (model.p - 2.0) / model.p;
    return 2.0 * (1.0 + 2.0 * std::pow(model.k, q) * std::riemann_zeta(model.b * q));
}

double mixing_increment_constant(const MixingModel& model) {
    const double K = mixing_covariance_constant(model);
    const double r = model.r();
    // ⌈n(t-s)⌉ ≤ 3n(t-s) and n^{1-r/2} ≤ (2(t-s))^{r/2-1} once n(t-s) ≥ 1/2.
    return 4.0 * std::pow(K * r, r / 2.0) +
           12.0 * std::pow(2.0, r / 2.0 - 1.0) * std::pow(r * std::pow(model.k, 1.0 / model.b), r - 1.0);
}

double mixing_mod_bound(const MixingModel& model, double epsilon, double a, double horizon, double n) {
    const double C = mixing_increment_constant(model);
    require(n >= 1.0 && epsilon > 1.0 / (2.0 * n), ErrorKind::ParameterDomain, "epsilon must exceed 1/(2n)");
    require(a > 0.0 && horizon > 0.0, ErrorKind::ParameterDomain, "need a > 0 and T > 0");
    const double r = model.r();
    // Oscillation ≥ a c_p within ε forces a block sup ≥ a c_p/3 = 4 λ c_p with λ = a/12.
    return std::pow(12.0, r) * C * horizon * (1.0 + epsilon / horizon) * std::pow(a, -r) *
           std::pow(epsilon, r / 2.0 - 1.0);
}

// ---------------------------------------------------------------------------
// i.i.d. partial sums

double default_rosenthal_constant(double p) { return std::pow(2.0 * p, p); }

ChentsovCondition iid_chentsov_condition(double p, double abs_moment_p, std::optional<double> rosenthal) {
    require(p >= 3.0, ErrorKind::UnsupportedMoment, "partial-sum envelope needs p >= 3");
    require(abs_moment_p > 0.0, ErrorKind::ParameterDomain, "E|W|^p must be positive");
    const double cp = rosenthal.value_or(default_rosenthal_constant(p));
    require(cp > 0.0, ErrorKind::ParameterDomain, "Rosenthal constant must be positive");
    ChentsovCondition c;
    c.K = std::pow(2.0, p / 2.0) * cp * abs_moment_p;
    c.beta = p / 2.0;
    c.gamma = p;
    c.validity = Validity::AllScales;
    c.form = ConditionForm::MinOfTwo;
    return c;
}

DiscreteTail iid_jump_tail(double p, double abs_moment_p, double n) {
    return DiscreteTail::jump(2.0 * abs_moment_p, p, n);
}

double iid_partial_sum_envelope(double p, double abs_moment_p, double n, double epsilon, double theta,
                                double horizon, std::optional<double> rosenthal) {
    const ChentsovCondition cond = iid_chentsov_condition(p, abs_moment_p, rosenthal);
    require(n >= 1.0 && epsilon > 1.0 / n && epsilon < 1.0, ErrorKind::ParameterDomain,
            "epsilon must lie in " + range_text(1.0 / n, 1.0, false));
    require(theta > 0.0, ErrorKind::ParameterDomain, "theta must be positive");
    return chaining_bound(cond, iid_jump_tail(p, abs_moment_p, n), n, epsilon, theta, horizon, 1);
}

// ---------------------------------------------------------------------------
// Empirical tails

ProportionEstimate empirical_tail_from_differences(std::span<const double> differences, double theta) {
    require(!differences.empty(), ErrorKind::InsufficientData, "no paths supplied");
    std::size_t hits = 0;
    for (double d : differences) hits += (theta <= 0.0 || d >= theta) ? 1 : 0;
    return wilson_interval(hits, differences.size());
}

ProportionEstimate empirical_mod_tail(std::span<const PiecewisePath> paths, double epsilon, double theta,
                                      unsigned workers) {
    require(paths.size() >= 100, ErrorKind::InsufficientData, "empirical tails need at least 100 paths");
    require(epsilon > 0.0, ErrorKind::ParameterDomain, "epsilon must be positive");
    std::vector<double> diffs(paths.size());
    parallel_for(paths.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) diffs[i] = RegularizedPath(paths[i], epsilon).sup_difference();
    });
    return empirical_tail_from_differences(diffs, theta);
}

// ---------------------------------------------------------------------------
// TailEnvelope

bool TailEnvelope::valid_at(double epsilon) const noexcept {
    if (!(epsilon > eps_min)) return false;
    return eps_max_inclusive ? epsilon <= eps_max : epsilon < eps_max;
}

double TailEnvelope::unclamped(double epsilon, double threshold) const {
    require(valid_at(epsilon), ErrorKind::ParameterDomain,
            source + " envelope needs epsilon in " + range_text(eps_min, eps_max, eps_max_inclusive));
    if (threshold <= 0.0) return 1.0;
    return raw(epsilon, threshold);
}

double TailEnvelope::operator()(double epsilon, double threshold) const {
    const double v = unclamped(epsilon, threshold);
    if (std::isnan(v)) return 1.0;
    return std::clamp(v, 0.0, 1.0);
}

TailEnvelope TailEnvelope::zero() {
    TailEnvelope e;
    e.source = "zero";
    e.eps_min = 0.0;
    e.eps_max = kInf;
    e.raw = [](double, double) { return 0.0; };
    return e;
}

TailEnvelope TailEnvelope::gaussian(const GaussianKernel& kernel, double gamma, double horizon) {
    // Validate eagerly at a representative point.
    gaussian_regularization_tail(kernel, gamma, 0.5, 1.0, horizon);
    TailEnvelope e;
    e.source = "gaussian_regularization";
    e.params = {{"k", kernel.k}, {"tau", kernel.tau}, {"gamma", gamma}, {"T", horizon}};
    e.eps_min = 0.0;
    e.eps_max = 1.0;
    e.raw = [kernel, gamma, horizon](double eps, double lambda) {
        return gaussian_regularization_tail(kernel, gamma, eps, lambda, horizon);
    };
    return e;
}

TailEnvelope TailEnvelope::iid(double p, double abs_moment_p, double n, double horizon,
                               std::optional<double> rosenthal) {
    const ChentsovCondition cond = iid_chentsov_condition(p, abs_moment_p, rosenthal);
    require(n >= 2.0, ErrorKind::ParameterDomain, "partial-sum envelope needs n >= 2");
    TailEnvelope e;
    e.source = "iid_partial_sum";
    e.params = {{"p", p}, {"abs_moment_p", abs_moment_p}, {"n", n}, {"T", horizon},
                {"K", cond.K}, {"beta", cond.beta}, {"gamma", cond.gamma}};
    e.eps_min = 1.0 / n;
    e.eps_max = 1.0;
    e.raw = [=](double eps, double theta) {
        return iid_partial_sum_envelope(p, abs_moment_p, n, eps, theta, horizon, rosenthal);
    };
    return e;
}

TailEnvelope TailEnvelope::mixing(const MixingModel& model, double n, double horizon) {
    const double C = mixing_increment_constant(model);
    TailEnvelope e;
    e.source = "mixing";
    e.params = {{"p", model.p}, {"c_p", model.c_p}, {"k", model.k}, {"b", model.b},
                {"r", model.r()}, {"C", C}, {"n", n}, {"T", horizon}};
    e.eps_min = 1.0 / (2.0 * n);
    e.eps_max = horizon;
    e.eps_max_inclusive = true;
    e.raw = [=](double eps, double theta) {
        return mixing_mod_bound(model, eps, theta / model.c_p, horizon, n);
    };
    return e;
}

TailEnvelope TailEnvelope::chaining(const ChentsovCondition& cond, std::optional<DiscreteTail> phi,
                                    double n, double horizon, std::size_t dim) {
    TailEnvelope e;
    e.source = "chaining";
    e.params = {{"K", cond.K}, {"beta", cond.beta}, {"gamma", cond.gamma}, {"n", n},
                {"T", horizon}, {"d", static_cast<double>(dim)}};
    e.eps_min = cond.validity == Validity::Restricted ? 1.0 / n : 0.0;
    e.eps_max = 1.0;
    e.raw = [=](double eps, double theta) {
        return chaining_bound(cond, phi, n, eps, theta / std::sqrt(static_cast<double>(dim)), horizon, dim);
    };
    return e;
}

} // namespace gsmooth
