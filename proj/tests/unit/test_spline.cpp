#include <doctest.h>

#include <cmath>
#include <vector>

#include "sandcast/errors.hpp"
#include "sandcast/ingest.hpp"
#include "sandcast/rng.hpp"
#include "sandcast/spline.hpp"

using namespace sandcast;

TEST_CASE("spline reproduces constants") {
    std::vector<double> t = {0.0, 1.3, 2.1, 5.0, 9.0};
    std::vector<double> v(t.size(), 3.7);
    auto out = ingest::resample_uniform(t, v, 0.0, 9.0, 0.5);
    for (double y : out) CHECK(y == doctest::Approx(3.7).epsilon(1e-14));
}

TEST_CASE("not-a-knot spline is exact on a cubic (direct evaluation oracle)") {
    auto p = [](double t) { return t * t * t - 2.0 * t; };
    std::vector<double> t = {0.0, 2.0, 4.0, 6.0, 8.0};
    std::vector<double> v;
    for (double x : t) v.push_back(p(x));
    auto out = ingest::resample_uniform(t, v, 0.0, 8.0, 0.1);
    REQUIRE(out.size() == 81);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double tq = 0.0 + static_cast<double>(k) * 0.1;
        CHECK(std::fabs(out[k] - p(tq)) <= 1e-9);
    }
}

TEST_CASE("resampling 2 ms to 0.1 ms gives 20*(n-1)+1 samples") {
    const std::size_t n = 50;
    std::vector<double> t(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = 1000.0 + 2.0 * static_cast<double>(i);
        v[i] = std::sin(0.05 * t[i]);
    }
    auto out = ingest::resample_uniform(t, v, t.front(), t.back(), 0.1);
    CHECK(out.size() == 20 * (n - 1) + 1);
}

TEST_CASE("spline errors") {
    std::vector<double> t3 = {0.0, 1.0, 2.0};
    std::vector<double> v3 = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(ingest::resample_uniform(t3, v3, 0.0, 2.0, 0.5), DataError);

    std::vector<double> t = {0.0, 1.0, 2.0, 3.0};
    std::vector<double> v = {0.0, 1.0, 2.0, 3.0};
    CHECK_THROWS_AS(ingest::resample_uniform(t, v, 0.0, 4.0, 0.5), DataError);
    CHECK_THROWS_AS(ingest::resample_uniform(t, v, -1.0, 3.0, 0.5), DataError);
}

TEST_CASE("property: exact on random polynomials up to degree 3") {
    UniformRng rng(2024);
    for (int rep = 0; rep < 50; ++rep) {
        const double c0 = rng.uniform(-5, 5), c1 = rng.uniform(-5, 5), c2 = rng.uniform(-5, 5),
                     c3 = rng.uniform(-5, 5);
        auto p = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
        const std::size_t n = 4 + static_cast<std::size_t>(rng.next01() * 10);
        std::vector<double> t(n), v(n);
        t[0] = rng.uniform(-3, 0);
        for (std::size_t i = 1; i < n; ++i) t[i] = t[i - 1] + rng.uniform(0.2, 2.0);
        for (std::size_t i = 0; i < n; ++i) v[i] = p(t[i]);
        CubicSpline sp(t, v);
        for (int q = 0; q < 40; ++q) {
            const double x = rng.uniform(t.front(), t.back());
            CHECK(std::fabs(sp.eval(x) - p(x)) <= 1e-9);
        }
    }
}

TEST_CASE("spline interpolates its knots") {
    UniformRng rng(7);
    std::vector<double> t(8), v(8);
    t[0] = 0.0;
    for (std::size_t i = 1; i < 8; ++i) t[i] = t[i - 1] + rng.uniform(0.5, 1.5);
    for (auto& y : v) y = rng.uniform(-10, 10);
    CubicSpline sp(t, v);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(sp.eval(t[i]) == doctest::Approx(v[i]).epsilon(1e-12));
}
