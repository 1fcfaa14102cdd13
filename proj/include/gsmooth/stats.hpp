#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace gsmooth {

/// Monte-Carlo budget. `workers == 0` means one worker per hardware thread.
/// Results never depend on `workers`.
struct MonteCarlo {
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

unsigned resolve_workers(unsigned requested) noexcept;

/// Static chunked parallel loop over [0, n). `body(begin, end)` is called once
/// per chunk; the first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

struct SampleSummary {
    double mean = 0.0;
    double std_dev = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Welford accumulation in index order, so the result is independent of how
/// the values were produced. A constant sample has exactly zero spread.
SampleSummary summarize(std::span<const double> values);

/// Sample covariance of (a, b) together with the standard error of the
/// covariance estimator (sd of the centred products over sqrt(count)).
SampleSummary summarize_covariance(std::span<const double> a, std::span<const double> b);

inline constexpr double kZ95 = 1.959963984540054;

struct ProportionEstimate {
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t successes = 0;
    std::size_t trials = 0;

    double std_error() const noexcept;
};

/// Wilson score interval.
ProportionEstimate wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

} // namespace gsmooth
