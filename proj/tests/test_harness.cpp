#include "gsmooth/errors.hpp"
#include "gsmooth/harness.hpp"
#include "gsmooth/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstring>
#include <sstream>

using namespace gsmooth;

namespace {

ProcessModel iid(Innovation d, std::size_t n, double p = 4.0, double nu = 8.0) {
    ProcessModel m;
    m.variant = IidPartialSum{d, n, p, nu};
    return m;
}

ErrorKind config_error_kind(const std::string& text) {
    try {
        parse_config(Json::parse(text));
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::MalformedPath;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("partial sums: knots, increments and determinism") {
    const auto m = iid(Innovation::Rademacher, 50);
    Rng a(3, 0), b(3, 0);
    const auto x = simulate_partial_sum(m, a);
    const auto y = simulate_partial_sum(m, b);
    CHECK(x.values() == y.values());
    CHECK(x.mode() == Interpolation::Step);
    REQUIRE(x.knot_count() == 51);
    CHECK(x.knot(0)[0] == 0.0);
    for (std::size_t j = 1; j <= 50; ++j) {
        CHECK(x.times()[j] == doctest::Approx(j / 50.0).epsilon(1e-15));
        CHECK(std::abs(std::abs(x.knot(j)[0] - x.knot(j - 1)[0]) * std::sqrt(50.0) - 1.0) < 1e-12);
    }
    ProcessModel ar;
    ar.variant = MixingSum{0.6, 40, {}};
    Rng c(1, 1);
    CHECK(simulate_partial_sum(ar, c).knot_count() == 41);
}

TEST_CASE("innovations have zero mean and unit variance") {
    for (auto d : {Innovation::Rademacher, Innovation::Uniform, Innovation::Exponential, Innovation::StudentT}) {
        const IidPartialSum s{d, 1, 4.0, 8.0};
        Rng rng(derive_seed(5, to_string(d)), 0);
        std::vector<double> v(200000);
        for (double& x : v) x = draw_innovation(s, rng);
        const auto st = summarize(v);
        CHECK(std::abs(st.mean) <= 4.0 * st.std_error);
        CHECK(st.std_dev * st.std_dev == doctest::Approx(1.0).epsilon(0.03));
        CHECK(parse_innovation(to_string(d)) == d);
    }
    CHECK_THROWS_AS(parse_innovation("cauchy"), Error);
}

TEST_CASE("absolute moments of the innovations") {
    CHECK(iid(Innovation::Rademacher, 10).abs_moment() == 1.0);
    // Uniform on (-√3, √3): E|W|^4 = 9/5.
    CHECK(iid(Innovation::Uniform, 10).abs_moment() == doctest::Approx(1.8).epsilon(1e-14));
    // Centred unit exponential: E|E - 1|^4 = 9.
    CHECK(iid(Innovation::Exponential, 10).abs_moment() == doctest::Approx(9.0).epsilon(1e-12));
    const double quad = oracle::integrate(
        [](double x) { return std::pow(std::abs(x - 1.0), 3.0) * std::exp(-x); }, 0.0, 60.0, {1.0});
    CHECK(iid(Innovation::Exponential, 10, 3.0).abs_moment() == doctest::Approx(quad).epsilon(1e-10));
    CHECK_THROWS_AS(iid(Innovation::StudentT, 10, 4.0, 4.0).validate(), Error);
}

TEST_CASE("set discrepancy") {
    const SetK everything(Functional::sup_indicator(1e9));
    const auto whole = estimate_set_discrepancy(iid(Innovation::Rademacher, 100), everything, MonteCarlo{1000, 1, 1});
    CHECK(whole.discrepancy == 0.0);
    const auto z = exact_bm_probability(SetK(Functional::sup_indicator(1.0)), 1.0);
    REQUIRE(z.has_value());
    CHECK(*z == doctest::Approx(0.68269).epsilon(1e-5));
    const auto one_time = exact_bm_probability(
        SetK(Functional::finite_dim_indicator({0.25}, {Halfspace{{1.0}, 0.5}, Halfspace{{-1.0}, 0.5}})), 1.0);
    REQUIRE(one_time.has_value());
    CHECK(*one_time == doctest::Approx(2.0 * oracle::phi(1.0) - 1.0).epsilon(1e-14));
    const auto d = estimate_set_discrepancy(iid(Innovation::Rademacher, 100), SetK(Functional::sup_indicator(1.0)),
                                            MonteCarlo{20000, 2, 1});
    CHECK(d.z_exact);
    CHECK(d.ci_lo <= d.discrepancy);
    CHECK(d.discrepancy <= d.ci_hi);
    CHECK(d.discrepancy < 0.1);
}

TEST_CASE("number formatting round-trips bit-exactly") {
    Rng rng(9, 9);
    for (int i = 0; i < 10000; ++i) {
        double x;
        const std::uint64_t bits = rng();
        std::memcpy(&x, &bits, sizeof x);
        if (std::isnan(x)) continue;
        const double back = parse_double(format_double(x));
        CHECK(std::memcmp(&x, &back, sizeof x) == 0);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::isnan(parse_double("nan")));
    CHECK(parse_double(" 2.5 ") == 2.5);
    CHECK_THROWS_AS(parse_double("1.0x"), Error);
    CHECK_THROWS_AS(parse_double(""), Error);
}

TEST_CASE("path CSV round trip") {
    const PiecewisePath w(2, 1.0, {0.0, 0.1, 0.7}, {0.0, 1.0, -0.3, 1e-17, 2.5, 1.0 / 3.0}, Interpolation::Linear);
    std::ostringstream out;
    write_path_csv(out, w);
    CHECK(out.str().rfind("t,v1,v2\n", 0) == 0);
    std::istringstream in(out.str());
    const auto back = read_path_csv(in, 1.0, Interpolation::Linear);
    CHECK(back.times() == w.times());
    CHECK(back.values() == w.values());
    std::istringstream bad_header("time,x\n0,1\n");
    CHECK_THROWS_AS(read_path_csv(bad_header, 1.0, Interpolation::Step), Error);
    std::istringstream ragged("t,v1\n0,1\n0.5\n");
    CHECK_THROWS_AS(read_path_csv(ragged, 1.0, Interpolation::Step), Error);
    std::istringstream unsorted("t,v1\n0,1\n0.5,2\n0.4,3\n");
    try {
        read_path_csv(unsorted, 1.0, Interpolation::Step);
        FAIL("expected a malformed path");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedPath);
    }
}

TEST_CASE("experiment configs") {
    const auto cfg = parse_config(Json::parse(R"({
        "schema": 1, "seed": 7,
        "model": {"type": "iid", "distribution": "rademacher", "n": 10000, "p": 4},
        "set": {"type": "sup_indicator", "level": 1.0},
        "params": {"epsilon": 0.1, "delta": 0.2, "theta": 0.3, "gamma": 0.4}
    })"));
    CHECK(cfg.seed == 7);
    CHECK(cfg.kappa_order_only);
    CHECK(cfg.kappa1 == doctest::Approx(0.01));
    REQUIRE(cfg.params.has_value());
    CHECK((*cfg.params)[3] == 0.4);
    const auto in = theorem_inputs(cfg);
    CHECK(theorem_bound(in, 0.1, 0.2, 0.3, 0.4).total > 0.0);

    CHECK(config_error_kind(R"({"seed": 1})") == ErrorKind::Config);
    CHECK(config_error_kind(R"({"schema": 2, "seed": 1})") == ErrorKind::Config);
    CHECK(config_error_kind(R"({"schema": 1, "seed": -1})") == ErrorKind::Config);
    CHECK(config_error_kind(R"({"schema": 1, "seed": 1, "set": {"type": "ball"}})") == ErrorKind::Config);
    CHECK(config_error_kind(R"({"schema": 1, "seed": 1, "model": {"type": "iid", "distribution": "cauchy"}})") ==
          ErrorKind::Config);
    CHECK(config_error_kind(R"({"schema": 1, "seed": 1, "kappa": {"order_only_c": 1}})") == ErrorKind::Config);
    const auto smoothing_only = parse_config(Json::parse(R"({"schema": 1, "seed": 1,
        "functional": {"type": "constant", "value": 1}, "smoothing": {"epsilon": 0.1, "delta": 0.2}})"));
    CHECK(smoothing_only.kappa_missing);
    CHECK_THROWS_AS(theorem_inputs(smoothing_only), Error);
    CHECK(config_error_kind(R"({"schema": 1, "seed": 1, "kappa": {"kappa1": 0, "kappa2": 0},
                                "monte_carlo": {"samples": 5}})") == ErrorKind::Config);
}

TEST_CASE("report plumbing") {
    CHECK(parse_suite("all") == Suite::All);
    CHECK(parse_suite("smoothing") == Suite::Smoothing);
    CHECK_THROWS_AS(parse_suite("everything"), Error);
    CHECK(required_operations().size() >= 30);
}

TEST_CASE("a suite does not depend on the worker count") {
    ValidateOptions o;
    o.suite = Suite::Rates;
    o.seed = 11;
    o.budget_scale = 0.01;
    o.workers = 1;
    const auto a = run_validation(o);
    o.workers = 3;
    const auto b = run_validation(o);
    CHECK(report_json(a).dump() == report_json(b).dump());
    CHECK(rows_csv(a) == rows_csv(b));
    CHECK(a.passed());
}

}
