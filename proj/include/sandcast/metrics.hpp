#ifndef SANDCAST_METRICS_HPP
#define SANDCAST_METRICS_HPP

#include <chrono>
#include <span>
#include <utility>

namespace sandcast::metrics {

// Population (divisor n) forms throughout. Inputs must be equal-length,
// non-empty and finite; cc additionally needs nonzero variance on both sides.

double cc(std::span<const double> target, std::span<const double> predicted);
double rmse(std::span<const double> target, std::span<const double> predicted);
double aem(std::span<const double> target, std::span<const double> predicted);

// Wall time of a block on the monotonic clock, in seconds.
template <typename F>
auto timed(F&& block) {
    auto t0 = std::chrono::steady_clock::now();
    auto result = block();
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    return std::make_pair(std::move(result), secs);
}

} // namespace sandcast::metrics

#endif
