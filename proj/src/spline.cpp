#include "sandcast/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sandcast/errors.hpp"

namespace sandcast {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n != y_.size()) throw DataError("spline: x and y lengths differ");
    if (n < 4) throw DataError("insufficient-data: cubic spline needs >= 4 points, got " +
                               std::to_string(n));
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw DataError("spline: x not strictly increasing at index " + std::to_string(i));

    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

    // Moment formulation. Interior second-derivative continuity gives a
    // tridiagonal system in M_1..M_{n-2}; the not-a-knot conditions
    //   M_0 = (1+r0) M_1 - r0 M_2,        r0 = h0/h1
    //   M_{n-1} = (1+r1) M_{n-2} - r1 M_{n-3},  r1 = h_{n-2}/h_{n-3}
    // are folded into the first and last interior rows.
    const std::size_t m = n - 2; // unknowns M_1..M_{n-2}
    std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), rhs(m, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t r = i - 1;
        lo[r] = h[i - 1] / 6.0;
        di[r] = (h[i - 1] + h[i]) / 3.0;
        up[r] = h[i] / 6.0;
        rhs[r] = (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
    }
    const double r0 = h[0] / h[1];
    di[0] += lo[0] * (1.0 + r0);
    up[0] -= lo[0] * r0;
    lo[0] = 0.0;
    const double r1 = h[n - 2] / h[n - 3];
    di[m - 1] += up[m - 1] * (1.0 + r1);
    lo[m - 1] -= up[m - 1] * r1;
    up[m - 1] = 0.0;

    // Thomas solve
    for (std::size_t r = 1; r < m; ++r) {
        const double w = lo[r] / di[r - 1];
        di[r] -= w * up[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    m_.assign(n, 0.0);
    m_[n - 2] = rhs[m - 1] / di[m - 1];
    for (std::size_t r = m - 1; r-- > 0;) m_[r + 1] = (rhs[r] - up[r] * m_[r + 2]) / di[r];
    m_[0] = (1.0 + r0) * m_[1] - r0 * m_[2];
    m_[n - 1] = (1.0 + r1) * m_[n - 2] - r1 * m_[n - 3];
}

double CubicSpline::eval(double xq) const {
    const double tol = 1e-9 * std::max(1.0, std::max(std::fabs(x_.front()), std::fabs(x_.back())));
    if (xq < x_.front() - tol || xq > x_.back() + tol)
        throw DataError("extrapolation: query " + std::to_string(xq) + " outside [" +
                        std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");

    auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);

    const double h = x_[i + 1] - x_[i];
    const double t1 = x_[i + 1] - xq;
    const double t2 = xq - x_[i];
    return (m_[i] * t1 * t1 * t1 + m_[i + 1] * t2 * t2 * t2) / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * t1 + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * t2;
}

} // namespace sandcast
