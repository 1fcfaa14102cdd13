#include "gsmooth/bounds.hpp"
#include "gsmooth/errors.hpp"
#include "gsmooth/gaussian.hpp"
#include "gsmooth/harness.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace gsmooth;

namespace {

TheoremInputs bare() {
    TheoremInputs in;
    in.set = SetK(Functional::sup_indicator(1.0), 0.0);
    return in;
}

TheoremInputs rademacher_inputs(double p, double n) {
    TheoremInputs in;
    in.kappa1 = in.kappa2 = order_only_kappa(1.0, 1.0, n);
    in.kappa_order_only = true;
    in.x_tail = TailEnvelope::iid(p, 1.0, n, 1.0);
    in.z_tail = TailEnvelope::gaussian({1.0, 1.0}, 4.0, 1.0);
    in.set = SetK(Functional::sup_indicator(1.0));
    return in;
}

} // namespace

TEST_SUITE("bounds") {

TEST_CASE("c_eps_delta_T") {
    CHECK(c_eps_delta_T(1.0, 1.0, 1.0) ==
          doctest::Approx(1.0 + 1.0 + std::sqrt(2.0) + std::sqrt(50.0 / std::numbers::pi)).epsilon(1e-14));
    const double cubic = [](double e, double d) { return std::sqrt(50.0 / std::numbers::pi) / std::pow(e * d, 3); }(0.4, 0.7);
    const double cubic_half = std::sqrt(50.0 / std::numbers::pi) / std::pow(0.2 * 0.7, 3);
    CHECK(cubic_half == doctest::Approx(8.0 * cubic).epsilon(1e-14));
    CHECK(c_eps_delta_T(1e8, 1e8, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(c_eps_delta_T(0.0, 1.0, 1.0), Error);
}

TEST_CASE("theorem bound terms") {
    const auto b = theorem_bound(bare(), 0.5, 0.3, 0.2, 0.3);
    CHECK(b.total == doctest::Approx(4.0 * std::exp(-0.5)).epsilon(1e-15));
    CHECK(b.total == doctest::Approx(2.4261).epsilon(1e-4));
    CHECK(b.presented() == 1.0);
    for (double n : {1e2, 1e4, 1e6}) {
        const double delta = 0.37;
        const double gamma = delta * std::sqrt(10.0 * std::log(n));
        CHECK(theorem_bound(bare(), 0.5, delta, 0.2, gamma).bm == doctest::Approx(4.0 * std::pow(n, -5.0)).epsilon(1e-12));
    }
    const auto in = rademacher_inputs(4.0, 1e4);
    Rng rng(1, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const double e = 0.01 + 0.9 * rng.uniform(), d = 0.01 + 0.9 * rng.uniform();
        const double t = 0.01 + 3.0 * rng.uniform(), g = 0.01 + 3.0 * rng.uniform();
        const auto r = theorem_bound(in, e, d, t, g);
        for (double term : {r.stein, r.smoothness, r.x_tail, r.z_tail, r.bm, r.boundary}) {
            CHECK(term >= 0.0);
            CHECK(r.total >= term);
        }
        CHECK(r.total == doctest::Approx(r.stein + r.smoothness + r.x_tail + r.z_tail + r.bm + r.boundary));
        CHECK(lp_bound(in, e, d, t, g) <= r.total + 2.0 * (t + g));
    }
    TheoremInputs missing;
    try {
        theorem_bound(missing, 0.5, 0.5, 0.5, 0.5);
        FAIL("expected a missing-input error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingInput);
    }
    CHECK_THROWS_AS(theorem_bound(in, 1e-5, 0.5, 0.5, 0.5), Error);
}

TEST_CASE("theorem bound is monotone in its inputs") {
    const auto base = rademacher_inputs(4.0, 1e4);
    const double b0 = theorem_bound(base, 0.2, 0.4, 0.5, 0.6).total;
    auto more = base;
    more.kappa1 *= 2.0;
    CHECK(theorem_bound(more, 0.2, 0.4, 0.5, 0.6).total >= b0);
    more = base;
    more.kappa2 *= 2.0;
    CHECK(theorem_bound(more, 0.2, 0.4, 0.5, 0.6).total >= b0);
    more = base;
    more.set = SetK(Functional::sup_indicator(1.0), 1.0);
    CHECK(theorem_bound(more, 0.2, 0.4, 0.5, 0.6).total >= b0);
    more = base;
    more.x_tail = TailEnvelope::iid(4.0, 2.0, 1e4, 1.0);
    CHECK(theorem_bound(more, 0.2, 0.4, 0.5, 0.6).total >= b0);
}

TEST_CASE("Levy-Prokhorov bound") {
    const auto in = bare();
    CHECK(lp_bound(in, 0.5, 0.3, 50.0, 0.3) == doctest::Approx(2.0 * 50.3));
    CHECK(lp_bound(in, 0.5, 0.3, 0.2, 0.3) == doctest::Approx(std::max(1.0, 4.0 * std::exp(-0.5))));
    CHECK(lp_bound(in, 0.5, 0.3, 1.5, 0.3) == doctest::Approx(3.6));
}

TEST_CASE("Lipschitz bound") {
    TheoremInputs in;
    in.x_mean = [](double) { return 0.0; };
    in.z_mean = [](double) { return 0.0; };
    in.bm_sup_mean = expected_bm_supnorm(1).value;
    CHECK(lipschitz_bound(in, 0.5, 0.5) == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-15));
    in.kappa1 = 0.01;
    const auto b = lipschitz_breakdown(in, 0.5, 0.5);
    CHECK(b.stein == doctest::Approx(1.92).epsilon(1e-14));
    CHECK(b.smoothness == 0.0);
    CHECK_THROWS_AS(lipschitz_bound(in, 1.0, 0.5), Error);
    TheoremInputs empty;
    try {
        lipschitz_bound(empty, 0.5, 0.5);
        FAIL("expected a missing-input error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingInput);
    }
}

TEST_CASE("mean from tail against quadrature") {
    const auto tail = TailEnvelope::gaussian({1.0, 1.0}, 4.0, 1.0);
    for (double eps : {0.01, 0.1}) {
        // Beyond U the raw tail is A u^{-4} with A = tail(U) U^4, contributing tail(U) U / 3.
        const double U = 1e4;
        const double quad = oracle::integrate([&](double u) { return tail(eps, u); }, 0.0, U, {0.1, 1.0, 10.0, 100.0, 1e3}) +
                            tail.unclamped(eps, U) * U / 3.0;
        const double m = mean_from_tail(tail, eps);
        CHECK(m >= quad * (1.0 - 1e-8));
        CHECK(m <= quad * (1.0 + 1e-6) + 1e-12);
    }
    CHECK(mean_from_tail(TailEnvelope::zero(), 0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("optimizer") {
    SUBCASE("a single decreasing term drives gamma to the box maximum") {
        SearchBox box;
        box.delta_lo = box.delta_hi = 0.9;
        box.gamma_hi = 2.0;
        const auto res = optimize_bound(bare(), Objective::Indicator, box);
        CHECK(res.best.gamma == 2.0);
        CHECK(res.best.bm > 0.0);
        for (const auto& p : res.trace) CHECK(res.best.objective <= p.objective);
    }
    SUBCASE("a larger budget never does worse") {
        const auto in = rademacher_inputs(4.0, 1e4);
        double prev = 1e300;
        for (int budget = 4; budget <= 6; ++budget) {
            OptimizeOptions o;
            o.budget = budget;
            o.workers = 1;
            const auto r = optimize_bound(in, Objective::Indicator, SearchBox{}, o);
            CHECK(r.best.objective <= prev);
            prev = r.best.objective;
        }
    }
    SUBCASE("at least matches the closed-form balance") {
        const double n = 1e6;
        const auto in = rademacher_inputs(3.0, n);
        const auto closed = example_rate_params(3.0, 1.0, n);
        const double hand = theorem_bound(in, closed.epsilon, closed.delta, closed.theta, closed.gamma).total;
        const auto r = optimize_bound(in, Objective::Indicator, SearchBox{}, OptimizeOptions{4, 3, 1, {}});
        CHECK(r.best.total <= hand);
    }
    SUBCASE("results do not depend on the worker count") {
        const auto in = rademacher_inputs(4.0, 1e3);
        const auto a = optimize_bound(in, Objective::LevyProkhorov, SearchBox{}, OptimizeOptions{4, 2, 1, {}});
        const auto b = optimize_bound(in, Objective::LevyProkhorov, SearchBox{}, OptimizeOptions{4, 2, 4, {}});
        CHECK(a.best.objective == b.best.objective);
        CHECK(a.trace.size() == b.trace.size());
    }
    CHECK_THROWS_AS(optimize_bound(bare(), Objective::Indicator, SearchBox{}, OptimizeOptions{3, 3, 1, {}}), Error);
    SearchBox empty;
    empty.eps_hi = 1e-4;
    CHECK_THROWS_AS(optimize_bound(rademacher_inputs(4.0, 1e3), Objective::Indicator, empty), Error);
}

TEST_CASE("closed-form rates") {
    CHECK(indicator_rate_exponent(3) == Rational(1, 56));
    CHECK(lipschitz_rate_exponent(3) == Rational(1, 42));
    CHECK(example_rate_params(3.0, 1.0, 1e6).exponent == Rational(1, 56));
    CHECK(example_rate_params(3.0, 1.0, 1e6).exponent_limit == Rational(1, 20));
    CHECK(example_lipschitz_params(3.0, 1e6).exponent_limit == Rational(1, 18));
    // (p-2)/(20p-4) increases towards 1/20 with p.
    Rational prev = indicator_rate_exponent(3);
    for (std::int64_t p = 4; p < 2000; p *= 2) {
        const auto r = indicator_rate_exponent(p);
        CHECK(r.value() > prev.value());
        CHECK(r.value() < 0.05);
        prev = r;
    }
    CHECK(indicator_rate_exponent(1000000).value() == doctest::Approx(0.05).epsilon(1e-5));
    CHECK(lipschitz_rate_exponent(1000000).value() == doctest::Approx(1.0 / 18.0).epsilon(1e-5));
    CHECK(Rational(6, -8) == Rational(-3, 4));
    CHECK(Rational(2, 4).str() == "1/2");

    const auto r = example_rate_params(3.0, 1.0, 1e6);
    CHECK(r.epsilon == doctest::Approx(std::pow(1e6, -1.0 / 7.0)).epsilon(1e-12));
    CHECK(r.epsilon == doctest::Approx(0.13895).epsilon(1e-4));
    CHECK(r.theta == doctest::Approx(std::pow(1e6, -1.0 / 56.0)).epsilon(1e-12));
    CHECK(r.theta == doctest::Approx(0.78127).epsilon(1e-4));
    for (double p : {3.0, 4.0, 7.5}) {
        for (double T : {1.0, 2.0}) {
            const auto q = example_rate_params(p, T, 1e5);
            CHECK(q.theta == doctest::Approx(std::pow(T, 1.0 / (p + 1.0)) * std::pow(q.epsilon, (p - 2.0) / (2.0 * (p + 1.0)))).epsilon(1e-12));
            CHECK(q.theta == doctest::Approx(std::sqrt(T) * q.delta).epsilon(1e-12));
        }
    }
    const auto l = example_lipschitz_params(3.0, 1e6);
    CHECK(l.epsilon == doctest::Approx(std::pow(1e6, -1.0 / 7.0)).epsilon(1e-12));
    CHECK(l.delta == doctest::Approx(std::pow(l.epsilon, 1.0 / 6.0)).epsilon(1e-12));
    CHECK_THROWS_AS(example_rate_params(2.0, 1.0, 1e6), Error);
}

}
