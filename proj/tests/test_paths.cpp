#include "gsmooth/errors.hpp"
#include "gsmooth/paths.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace gsmooth;

TEST_SUITE("paths") {

TEST_CASE("evaluation follows right continuity and the constant extension") {
    const auto c = PiecewisePath::constant(std::vector<double>{3.0, 4.0}, 1.0);
    CHECK(c.eval(0.7) == std::vector<double>{3.0, 4.0});
    const auto step = PiecewisePath::scalar({0.0, 0.5}, {0.0, 1.0}, 1.0, Interpolation::Step);
    CHECK(step.eval_coord(0.5) == 1.0);
    CHECK(step.eval_coord(0.4999) == 0.0);
    CHECK(step.eval_coord(2.0) == 1.0);
    CHECK(step.eval_coord(-1.0) == 0.0);
    std::vector<double> left(1);
    step.view().left_limit_into(0.5, left);
    CHECK(left[0] == 0.0);
    const auto lin = PiecewisePath::scalar({0.0, 1.0}, {0.0, 1.0}, 1.0, Interpolation::Linear);
    CHECK(lin.eval_coord(0.25) == doctest::Approx(0.25));
    CHECK(lin.eval_coord(3.0) == 1.0);
}

TEST_CASE("malformed knot lists are rejected") {
    auto make = [](std::vector<double> t, std::vector<double> v) {
        return PiecewisePath(1, 1.0, std::move(t), std::move(v), Interpolation::Step);
    };
    CHECK_THROWS_AS(make({0.1, 0.5}, {1, 2}), Error);
    CHECK_THROWS_AS(make({0.0, 0.5, 0.5}, {1, 2, 3}), Error);
    CHECK_THROWS_AS(make({0.0, 1.5}, {1, 2}), Error);
    CHECK_THROWS_AS(make({0.0}, {std::nan("")}), Error);
    CHECK_THROWS_AS(make({0.0, 0.5}, {1}), Error);
    try {
        make({0.0, 0.4, 0.2}, {1, 2, 3});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedPath);
    }
}

TEST_CASE("sup norm") {
    CHECK(sup_norm(PiecewisePath::constant(std::vector<double>{3.0, 4.0}, 1.0)) == 5.0);
    CHECK(sup_norm(PiecewisePath::scalar({0.0, 0.2, 0.4}, {1.0, -2.0, 1.5}, 1.0, Interpolation::Step)) == 2.0);
    CHECK(sup_norm(PiecewisePath::scalar({0.0, 1.0}, {0.0, 1.0}, 1.0, Interpolation::Linear)) == 1.0);
}

TEST_CASE("modulus of continuity and jumps") {
    CHECK(modulus_of_continuity(PiecewisePath::constant(2.0, 1.0), 0.3) == 0.0);
    CHECK(modulus_of_continuity(PiecewisePath::indicator(0.5, 1.0), 0.1) == 1.0);
    const auto slope2 = PiecewisePath::scalar({0.0, 1.0}, {0.0, 2.0}, 1.0, Interpolation::Linear);
    CHECK(modulus_of_continuity(slope2, 0.25) == doctest::Approx(0.5));
    CHECK(max_jump(slope2) == 0.0);
    CHECK(max_jump(PiecewisePath::scalar({0.0, 0.3, 0.6}, {0.0, 1.0, -1.0}, 1.0, Interpolation::Step)) == 2.0);
    CHECK(max_jump(PiecewisePath::constant(1.0, 1.0)) == 0.0);
}

TEST_CASE("modulus against a brute-force window scan") {
    Rng rng(11, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto w = oracle::random_path(rng, 8, 1.0, rep % 2 ? Interpolation::Linear : Interpolation::Step);
        const double eta = 0.05 + 0.3 * rng.uniform();
        double brute = 0.0;
        const int N = 400;
        for (int i = 0; i <= N; ++i) {
            const double s = static_cast<double>(i) / N;
            for (int j = i + 1; j <= N && (j - i) / double(N) < eta; ++j) {
                brute = std::max(brute, std::abs(oracle::value_at(w, double(j) / N) - oracle::value_at(w, s)));
            }
        }
        const double exact = modulus_of_continuity(w, eta);
        CHECK(exact >= brute - 1e-12);
        if (w.mode() == Interpolation::Linear) {
            double slope = 0.0;
            for (std::size_t k = 1; k < w.knot_count(); ++k) {
                slope = std::max(slope, std::abs(w.knot(k)[0] - w.knot(k - 1)[0]) / (w.times()[k] - w.times()[k - 1]));
            }
            CHECK(exact <= brute + 2.0 * slope / N + 1e-12);
        }
    }
}

TEST_CASE("regularization matches the window integral") {
    const auto c = regularize(PiecewisePath::constant(1.5, 1.0), 0.2);
    for (double s : {0.0, 0.3, 1.0}) CHECK(c.value(s)[0] == doctest::Approx(1.5).epsilon(1e-15));
    const auto line = regularize(PiecewisePath::scalar({0.0, 1.0}, {0.0, 1.0}, 1.0, Interpolation::Linear), 0.1);
    for (double s : {0.1, 0.5, 0.9}) CHECK(line.value(s)[0] == doctest::Approx(s).epsilon(1e-14));
    const auto step = regularize(PiecewisePath::indicator(0.5, 1.0), 0.25);
    CHECK(step.value(0.5)[0] == doctest::Approx(0.5).epsilon(1e-15));

    Rng rng(5, 1);
    for (int rep = 0; rep < 30; ++rep) {
        const auto w = oracle::random_path(rng, 6, 1.0, rep % 2 ? Interpolation::Linear : Interpolation::Step);
        const double eps = 0.02 + 0.4 * rng.uniform();
        const auto r = regularize(w, eps);
        for (int k = 0; k < 5; ++k) {
            const double s = rng.uniform();
            CHECK(r.value(s)[0] == doctest::Approx(oracle::window_average(w, s, eps)).epsilon(1e-11));
            const double g = (oracle::value_at(w, s + eps) - oracle::value_at(w, s - eps)) / (2.0 * eps);
            CHECK(r.gradient(s)[0] == doctest::Approx(g).epsilon(1e-12));
        }
    }
}

TEST_CASE("breakpoints are sorted, unique and inside [0, T]") {
    Rng rng(2, 2);
    for (int rep = 0; rep < 20; ++rep) {
        const auto w = oracle::random_path(rng, 10, 1.0, Interpolation::Step);
        const auto pts = regularize(w, 0.01 + 0.5 * rng.uniform()).breakpoints();
        CHECK(pts.front() == 0.0);
        CHECK(pts.back() == 1.0);
        CHECK(std::adjacent_find(pts.begin(), pts.end(), std::greater_equal<>()) == pts.end());
    }
}

TEST_CASE("sup of |w_eps - w| dominates a dense scan and is attained") {
    Rng rng(8, 3);
    for (int rep = 0; rep < 20; ++rep) {
        const auto w = oracle::random_path(rng, 7, 1.0, rep % 2 ? Interpolation::Linear : Interpolation::Step, 1);
        const double eps = 0.03 + 0.3 * rng.uniform();
        const auto r = regularize(w, eps);
        double scan = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double s = i / 4000.0;
            scan = std::max(scan, std::abs(r.value(s)[0] - oracle::value_at(w, s)));
        }
        const double exact = r.sup_difference();
        CHECK(exact >= scan - 1e-12);
        // Slopes are bounded by 2·sup|w|/eps plus the source slope, so a 1/4000 scan is close.
        if (w.mode() == Interpolation::Linear) CHECK(exact <= scan + 1e-2);
        CHECK(exact <= modulus_of_continuity(w, eps) + 1e-12);
    }
}

TEST_CASE("gradient bound sup|grad w_eps| <= |w| / eps") {
    Rng rng(3, 4);
    for (int rep = 0; rep < 100; ++rep) {
        const auto w = oracle::random_path(rng, 12, 1.0, Interpolation::Step);
        const double eps = 0.01 + 0.5 * rng.uniform();
        CHECK(regularize(w, eps).sup_gradient() <= sup_norm(w) / eps);
    }
}

TEST_CASE("gradient energy") {
    const auto x = PiecewisePath::indicator_difference(0.3, 0.5, 1.0);
    CHECK(grad_energy(x, 0.1) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(indicator_difference_energy(0.3, 0.5, 1.0, 0.1) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(grad_energy(PiecewisePath::constant(2.0, 1.0), 0.1) == 0.0);
    // Windows leave [0, T]: only u - ε ∈ [0.3, 0.5) lies inside, giving 0.2.
    CHECK(grad_energy(x, 0.5) == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(grad_energy(x, 0.5) <= indicator_difference_energy(0.3, 0.5, 1.0, 0.5));

    Rng rng(4, 5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = oracle::random_path(rng, 5, 1.0, rep % 2 ? Interpolation::Linear : Interpolation::Step);
        const auto b = oracle::random_path(rng, 5, 1.0, a.mode());
        const double eps = 0.05 + 0.3 * rng.uniform();
        auto grad = [&](const PiecewisePath& p, double u) {
            return (oracle::value_at(p, u + eps) - oracle::value_at(p, u - eps)) / (2.0 * eps);
        };
        std::vector<double> cuts;
        for (const auto* p : {&a, &b}) {
            for (double t : p->times()) {
                cuts.push_back(t - eps);
                cuts.push_back(t + eps);
            }
        }
        const double quad = oracle::integrate([&](double u) { return grad(a, u) * grad(b, u); }, 0.0, 1.0, cuts);
        CHECK(grad_inner(a, b, eps) == doctest::Approx(quad).epsilon(1e-10));
    }
}

TEST_CASE("linear combinations") {
    const auto a = PiecewisePath::indicator(0.3, 1.0);
    const auto b = PiecewisePath::indicator(0.6, 1.0);
    const auto d = a.combine(1.0, b, -1.0);
    CHECK(d.eval_coord(0.4) == 1.0);
    CHECK(d.eval_coord(0.7) == 0.0);
    CHECK(a.scaled(2.0).eval_coord(0.5) == 2.0);
    const auto lin = PiecewisePath::scalar({0.0, 1.0}, {0.0, 1.0}, 1.0, Interpolation::Linear);
    CHECK_THROWS_AS(a.combine(1.0, lin, 1.0), Error);
}

}
