#pragma once

// Independent oracles shared by the unit and acceptance tests.

#include "gsmooth/paths.hpp"
#include "gsmooth/random.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Random scalar step or linear path with `knots` knots on [0, T].
inline gsmooth::PiecewisePath random_path(gsmooth::Rng& rng, std::size_t knots, double horizon,
                                          gsmooth::Interpolation mode, std::size_t dim = 1) {
    std::vector<double> times{0.0};
    while (times.size() < knots) times.push_back(rng.uniform() * horizon);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<double> values(times.size() * dim);
    for (double& v : values) v = 4.0 * rng.uniform() - 2.0;
    return {dim, horizon, times, values, mode};
}

/// Direct evaluation with the constant extension outside [0, T].
inline double value_at(const gsmooth::PiecewisePath& w, double u, std::size_t coord = 0) {
    const double T = w.horizon();
    const auto& t = w.times();
    if (u <= 0.0) return w.knot(0)[coord];
    if (u >= T) return w.knot(w.knot_count() - 1)[coord];
    std::size_t k = 0;
    while (k + 1 < t.size() && t[k + 1] <= u) ++k;
    const double a = w.knot(k)[coord];
    if (w.mode() == gsmooth::Interpolation::Step || k + 1 == t.size()) return a;
    const double b = w.knot(k + 1)[coord];
    return a + (b - a) * (u - t[k]) / (t[k + 1] - t[k]);
}

/// ∫_a^b f with 61-point Gauss–Kronrod on each piece between the given cut points.
inline double integrate(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts = {}) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::max(a, cuts[i]), hi = std::min(b, cuts[i + 1]);
        if (hi <= lo) continue;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
    }
    return total;
}

/// w_ε(s) by quadrature, split at the shifted knots.
inline double window_average(const gsmooth::PiecewisePath& w, double s, double eps, std::size_t coord = 0) {
    std::vector<double> cuts(w.times().begin(), w.times().end());
    cuts.push_back(w.horizon());
    return integrate([&](double u) { return value_at(w, u, coord); }, s - eps, s + eps, cuts) / (2.0 * eps);
}

/// Number of set partitions of {0..n-1} whose blocks have at most two elements,
/// by walking every restricted growth string.
inline std::size_t p2_partition_count(int n) {
    if (n == 0) return 1;
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::size_t count = 0;
    for (;;) {
        std::vector<int> sizes(static_cast<std::size_t>(n), 0);
        bool ok = true;
        for (int v : a) ok = ok && ++sizes[static_cast<std::size_t>(v)] <= 2;
        if (ok) ++count;
        int i = n - 1;
        for (; i > 0; --i) {
            const int mx = *std::max_element(a.begin(), a.begin() + i);
            if (a[static_cast<std::size_t>(i)] <= mx) {
                ++a[static_cast<std::size_t>(i)];
                std::fill(a.begin() + i + 1, a.end(), 0);
                break;
            }
        }
        if (i == 0) return count;
    }
}

inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace oracle
