#include "gsmooth/errors.hpp"
#include "gsmooth/random.hpp"
#include "gsmooth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gsmooth {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::MalformedPath: return "malformed-path";
    case ErrorKind::ParameterDomain: return "parameter-domain";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::UnsupportedOrder: return "unsupported-order";
    case ErrorKind::DivergentConstant: return "divergent-constant";
    case ErrorKind::DivergentEnvelope: return "divergent-envelope";
    case ErrorKind::InvalidMixingRate: return "invalid-mixing-rate";
    case ErrorKind::UnsupportedMoment: return "unsupported-moment";
    case ErrorKind::MissingConstant: return "missing-constant";
    case ErrorKind::MissingInput: return "missing-input";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Uncertified: return "uncertified";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Random numbers

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t state = seed ^ h;
    splitmix64(state);
    return splitmix64(state);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t state = seed;
    const std::uint64_t key = splitmix64(state);
    state = key ^ (stream * 0xD1B54A32D192ED03ULL);
    for (auto& word : s_) word = splitmix64(state);
}

double Rng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

double Rng::gamma(double shape) noexcept {
    if (shape < 1.0) {
        // Boost to shape + 1 and rescale by U^{1/shape}.
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// ---------------------------------------------------------------------------
// Parallel loop and summaries

unsigned resolve_workers(unsigned requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t w = std::min<std::size_t>(resolve_workers(workers), n);
    if (w <= 1) {
        body(0, n);
        return;
    }
    // Several chunks per worker keeps the tail short when chunks are uneven.
    const std::size_t chunks = std::min<std::size_t>(n, w * 8);
    const std::size_t chunk = (n + chunks - 1) / chunks;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> threads;
    threads.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        threads.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                const std::size_t begin = c * chunk;
                if (begin >= n) return;
                const std::size_t end = std::min(n, begin + chunk);
                try {
                    body(begin, end);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    threads.clear();
    if (error) std::rethrow_exception(error);
}

SampleSummary summarize(std::span<const double> values) {
    SampleSummary out;
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for (double x : values) {
        ++k;
        const double delta = x - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (x - mean);
    }
    out.count = k;
    out.mean = mean;
    if (k > 1) {
        out.std_dev = std::sqrt(std::max(0.0, m2 / static_cast<double>(k - 1)));
        out.std_error = out.std_dev / std::sqrt(static_cast<double>(k));
    }
    return out;
}

SampleSummary summarize_covariance(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = std::min(a.size(), b.size());
    SampleSummary out;
    out.count = n;
    if (n < 2) return out;
    const double ma = summarize(a.first(n)).mean;
    const double mb = summarize(b.first(n)).mean;
    std::vector<double> products(n);
    for (std::size_t i = 0; i < n; ++i) products[i] = (a[i] - ma) * (b[i] - mb);
    const SampleSummary p = summarize(products);
    out.mean = p.mean * static_cast<double>(n) / static_cast<double>(n - 1);
    out.std_dev = p.std_dev;
    out.std_error = p.std_error;
    return out;
}

double ProportionEstimate::std_error() const noexcept {
    if (trials == 0) return 0.0;
    return std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(trials));
}

ProportionEstimate wilson_interval(std::size_t successes, std::size_t trials, double z) {
    ProportionEstimate out;
    out.successes = successes;
    out.trials = trials;
    if (trials == 0) return out;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    out.estimate = p;
    out.ci_lo = std::max(0.0, centre - half);
    out.ci_hi = std::min(1.0, centre + half);
    return out;
}

} // namespace gsmooth
