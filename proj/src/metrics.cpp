#include "sandcast/metrics.hpp"

#include <cmath>
#include <string>

#include "sandcast/errors.hpp"

namespace sandcast::metrics {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || a.size() != b.size())
        throw DataError("paired series must have equal non-zero length (got " +
                        std::to_string(a.size()) + " and " + std::to_string(b.size()) + ")");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw DataError("paired series contain a non-finite value at index " + std::to_string(i));
}

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

double cc(std::span<const double> target, std::span<const double> predicted) {
    check_pair(target, predicted);
    const double mt = mean(target);
    const double mp = mean(predicted);
    double cov = 0.0, vt = 0.0, vp = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double dt = target[i] - mt;
        const double dp = predicted[i] - mp;
        cov += dt * dp;
        vt += dt * dt;
        vp += dp * dp;
    }
    if (vt == 0.0 || vp == 0.0)
        throw DataError("undefined-correlation: a series has zero variance");
    return cov / std::sqrt(vt * vp);
}

double rmse(std::span<const double> target, std::span<const double> predicted) {
    check_pair(target, predicted);
    double s = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double d = target[i] - predicted[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(target.size()));
}

double aem(std::span<const double> target, std::span<const double> predicted) {
    check_pair(target, predicted);
    double s = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) s += std::fabs(target[i] - predicted[i]);
    return s / static_cast<double>(target.size());
}

} // namespace sandcast::metrics
