#include "gsmooth/errors.hpp"
#include "gsmooth/gaussian.hpp"
#include "gsmooth/tightness.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace gsmooth;

namespace {

/// Σ_{j≥1} j^{-s} by direct summation plus the integral tail bound ∫_J^∞ x^{-s} dx.
double zeta_series(double s, std::size_t terms = 2000000) {
    double sum = 0.0;
    for (std::size_t j = terms; j >= 1; --j) sum += std::pow(static_cast<double>(j), -s);
    const double J = static_cast<double>(terms);
    // Euler–Maclaurin: tail ≈ J^{1-s}/(s-1) - J^{-s}/2.
    return sum + std::pow(J, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(J, -s);
}

} // namespace

TEST_SUITE("tightness") {

TEST_CASE("chaining constants") {
    const double psi = chaining_psi(2.0, 4.0);
    CHECK(psi == doctest::Approx(std::pow(2.0, -1.0 / 8.0)).epsilon(1e-15));
    CHECK(psi == doctest::Approx(0.91700).epsilon(1e-5));
    // Σ_{r≥1} (√2)^{-r} summed directly.
    double series = 0.0;
    for (int r = 1; r < 200; ++r) series += std::pow(std::sqrt(2.0), -r);
    CHECK(series == doctest::Approx(1.0 / (std::sqrt(2.0) - 1.0)).epsilon(1e-13));
    const double expected = std::pow(9.0 / (1.0 - psi), 4.0) * 4.0 * series;
    CHECK(chaining_series_constant(2.0, 4.0, psi) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(chaining_series_constant(2.0, 4.0, 0.5), Error);
    try {
        chaining_series_constant(2.0, 4.0, 0.5);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DivergentConstant);
    }
}

TEST_CASE("chaining bound limits and structure") {
    const ChentsovCondition single{3.0, 2.0, 4.0, Validity::AllScales, ConditionForm::SingleIncrement};
    double prev = 1e300;
    for (double lambda = 0.1; lambda < 1e4; lambda *= 3.0) {
        const double v = chaining_bound(single, std::nullopt, 1.0, 0.01, lambda, 1.0, 1);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-6);
    // Nondecreasing in ε.
    double last = 0.0;
    for (double eps : {0.001, 0.01, 0.1, 0.5}) {
        const double v = chaining_bound(single, std::nullopt, 1.0, eps, 0.5, 1.0, 1);
        CHECK(v >= last);
        last = v;
    }
    // Adding the φ term under the min-of-two form can only increase the bound.
    const auto phi = DiscreteTail::power_law(1.0, 3.0, 1000.0);
    const ChentsovCondition restricted{3.0, 2.0, 4.0, Validity::Restricted, ConditionForm::MinOfTwo};
    CHECK(chaining_bound(single, std::nullopt, 1000.0, 0.05, 0.5, 1.0, 1) <=
          chaining_bound(restricted, phi, 1000.0, 0.05, 0.5, 1.0, 1));
    CHECK_THROWS_AS(chaining_bound(restricted, phi, 1000.0, 0.0005, 0.5, 1.0, 1), Error);
    CHECK_THROWS_AS(chaining_bound(restricted, std::nullopt, 1000.0, 0.05, 0.5, 1.0, 1), Error);
}

TEST_CASE("dimension reduction") {
    const ChentsovCondition single{3.0, 2.0, 4.0, Validity::AllScales, ConditionForm::SingleIncrement};
    const auto env1 = TailEnvelope::chaining(single, std::nullopt, 1.0, 1.0, 1);
    for (std::size_t d : {2u, 3u, 5u}) {
        const auto envd = TailEnvelope::chaining(single, std::nullopt, 1.0, 1.0, d);
        const double lambda = 2.0;
        CHECK(envd.unclamped(0.05, lambda * std::sqrt(double(d))) ==
              doctest::Approx(double(d) * env1.unclamped(0.05, lambda)).epsilon(1e-13));
    }
}

TEST_CASE("mixing model") {
    const MixingModel m{4.0, 1.0, 1.0, 3.0};
    CHECK(m.r() == doctest::Approx(16.0 / 7.0).epsilon(1e-15));
    CHECK(mixing_covariance_constant(m) == doctest::Approx(2.0 * (1.0 + 2.0 * zeta_series(1.5))).epsilon(1e-9));
    CHECK(mixing_covariance_constant(m) == doctest::Approx(12.449).epsilon(1e-4));
    double prev = 1e300;
    for (double a = 1.0; a < 1e10; a *= 10.0) {
        const double v = mixing_mod_bound(m, 0.1, a, 1.0, 1000.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-8);
    CHECK_THROWS_AS(mixing_mod_bound(m, 0.0004, 1.0, 1.0, 1000.0), Error);
    try {
        mixing_mod_bound(MixingModel{4.0, 1.0, 1.0, 2.0}, 0.1, 1.0, 1.0, 1000.0);
        FAIL("expected an invalid mixing rate");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidMixingRate);
    }
}

TEST_CASE("i.i.d. partial-sum envelope") {
    const auto cond = iid_chentsov_condition(3.0, 1.0);
    CHECK(cond.K == doctest::Approx(std::pow(2.0, 1.5) * default_rosenthal_constant(3.0)).epsilon(1e-15));
    CHECK(default_rosenthal_constant(3.0) == 216.0);
    // T φ(θ/2) = 2^{p+1} E|W|^p T n^{1-p/2} θ^{-p}.
    const auto jump = iid_jump_tail(3.0, 1.0, 10000.0);
    for (double theta : {0.1, 0.5, 2.0}) {
        CHECK(jump(theta / 2.0) == doctest::Approx(16.0 / 100.0 * std::pow(theta, -3.0)).epsilon(1e-13));
    }
    double prev = 1e300;
    for (double theta = 0.5; theta < 1e5; theta *= 4.0) {
        const double v = iid_partial_sum_envelope(3.0, 1.0, 1000.0, 0.05, theta, 1.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-3);
    CHECK_THROWS_AS(iid_partial_sum_envelope(2.5, 1.0, 1000.0, 0.05, 1.0, 1.0), Error);
    CHECK_THROWS_AS(iid_partial_sum_envelope(3.0, 1.0, 1000.0, 0.0005, 1.0, 1.0), Error);
    const auto env = TailEnvelope::iid(3.0, 1.0, 1000.0, 1.0);
    CHECK(env(0.05, 0.75) <= 1.0);
    CHECK_FALSE(env.valid_at(0.001));
    CHECK_THROWS_AS(env(0.001, 0.75), Error);
}

TEST_CASE("empirical modulus tail") {
    std::vector<PiecewisePath> flat(150, PiecewisePath::constant(0.3, 1.0));
    CHECK(empirical_mod_tail(flat, 0.1, 0.2).estimate == 0.0);
    CHECK(empirical_mod_tail(flat, 0.1, 0.0).estimate == 1.0);
    std::vector<PiecewisePath> few(10, PiecewisePath::constant(0.3, 1.0));
    CHECK_THROWS_AS(empirical_mod_tail(few, 0.1, 0.2), Error);
    CHECK_THROWS_AS(empirical_tail_from_differences({}, 0.1), Error);
}

TEST_CASE("Brownian paths sit under the chaining envelope") {
    BrownianConfig cfg;
    cfg.grid = uniform_grid(1.0, 2048);
    cfg.seed = 17;
    std::vector<PiecewisePath> paths;
    for (std::size_t i = 0; i < 10000; ++i) paths.push_back(sample_bm(cfg, i));
    const ChentsovCondition bm{3.0, 2.0, 4.0, Validity::AllScales, ConditionForm::SingleIncrement};
    const double bound = chaining_bound(bm, std::nullopt, 1.0, 0.01, 0.5, 1.0, 1);
    const auto est = empirical_mod_tail(paths, 0.01, 0.5, 1);
    CHECK(est.ci_hi <= bound);
    CHECK(est.estimate < 0.1 * std::min(1.0, gaussian_regularization_tail({1.0, 1.0}, 4.0, 0.01, 0.5, 1.0)) + 0.01);
}

TEST_CASE("envelopes are nonincreasing in the threshold and nondecreasing in epsilon") {
    const std::vector<TailEnvelope> envs{
        TailEnvelope::gaussian({1.0, 1.0}, 4.0, 1.0),
        TailEnvelope::iid(4.0, 1.0, 1000.0, 1.0),
        TailEnvelope::mixing(MixingModel{4.0, 1.0, 1.0, 3.0}, 1000.0, 1.0),
    };
    for (const auto& e : envs) {
        for (double eps : {0.01, 0.1, 0.5}) {
            double prev = 2.0;
            for (double th = 0.05; th < 1e3; th *= 2.0) {
                const double v = e(eps, th);
                CHECK(v <= prev);
                CHECK(v >= 0.0);
                prev = v;
            }
        }
        for (double th : {1.0, 100.0}) CHECK(e.unclamped(0.01, th) <= e.unclamped(0.5, th));
    }
    CHECK(TailEnvelope::zero()(0.5, 0.1) == 0.0);
}

}
