#ifndef SANDCAST_SPLINE_HPP
#define SANDCAST_SPLINE_HPP

#include <span>
#include <vector>

namespace sandcast {

/// Cubic interpolating spline with not-a-knot end conditions.
///
/// Not-a-knot forces third-derivative continuity at the second and
/// second-to-last knots, which makes the spline reproduce polynomials of
/// degree <= 3 exactly — the property the resampling tests key on.
/// Requires >= 4 strictly increasing knots. Evaluation outside the knot
/// span is an error (no extrapolation).
class CubicSpline {
public:
    CubicSpline(std::span<const double> x, std::span<const double> y);

    double eval(double xq) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_; // second derivatives at knots
};

} // namespace sandcast

#endif
