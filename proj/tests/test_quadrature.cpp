#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sinebeta/chebyshev.hpp"
#include "sinebeta/errors.hpp"
#include "sinebeta/quadrature.hpp"

using namespace sinebeta;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto& r = quad::gauss_legendre(10);
    double s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], 18);
    CHECK(s == doctest::Approx(2.0 / 19).epsilon(1e-14));
    CHECK(quad::gauss([](double x) { return x * x * x - x; }, 0.0, 2.0, 4) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adaptive handles endpoint singularities") {
    const double v = quad::adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(std::abs(v - 2.0 / 3) < 1e-11);
    const double w = quad::adaptive([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(std::abs(w + 1.0) < 1e-10);
}

TEST_CASE("adaptive over break points") {
    const std::vector<double> br{-1.0, 0.0, 1.0};
    const double v = quad::adaptive([](double x) { return std::abs(x); }, br);
    CHECK(std::abs(v - 1.0) < 1e-14);
}

TEST_CASE("singular quadrature of log kernels") {
    // int_{-2}^{3} -log|t - 0.7| dt against the antiderivative formula
    const std::vector<double> br;
    const double v = quad::singular([](double, double d) { return -std::log(std::abs(d)); }, -2.0, 3.0, 0.7, br);
    CHECK(std::abs(v - quad::log_potential_interval(-2.0, 3.0, 0.7)) < 1e-11);
    // inverse square root singularity
    const double w = quad::singular([](double, double d) { return 1.0 / std::sqrt(std::abs(d)); }, 0.0, 1.0, 0.0, br);
    CHECK(std::abs(w - 2.0) < 1e-10);
}

TEST_CASE("log energy of a square") {
    // iint_{[0,a]^2} -log|x-y| = a^2 (3/2 - log a)
    for (double a : {0.5, 1.0, 2.0, 10.0}) {
        const double e = quad::log_energy_rectangle(0.0, a, 0.0, a);
        CHECK(e == doctest::Approx(a * a * (1.5 - std::log(a))).epsilon(1e-13));
    }
    // disjoint rectangle against direct 2-D quadrature
    const double e = quad::log_energy_rectangle(0.0, 1.0, 2.0, 4.0);
    const double d = quad::adaptive(
        [](double x) { return quad::log_potential_interval(2.0, 4.0, x); }, 0.0, 1.0);
    CHECK(e == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("merge_breaks keeps the interval ends") {
    const std::vector<double> extra{5.0, -3.0, 0.5, 0.5, 2.0};
    const auto b = quad::merge_breaks(0.0, 3.0, extra);
    REQUIRE(b.size() == 4);
    CHECK(b.front() == 0.0);
    CHECK(b[1] == 0.5);
    CHECK(b[2] == 2.0);
    CHECK(b.back() == 3.0);
}

TEST_CASE("non-convergence is reported") {
    CHECK_THROWS_AS(quad::adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, {1e-12, 1e-12}, 50), NonFinite);
}

TEST_CASE("piecewise chebyshev interpolation") {
    const std::vector<double> br{0.0, 1.0, 3.0};
    auto f = [](double x) { return std::exp(-x) * std::sin(3 * x); };
    const auto p = PiecewiseChebyshev::build(f, br, 20, 1e-14);
    for (double x = 0.0; x <= 3.0; x += 0.0137) CHECK(std::abs(p(x) - f(x)) < 1e-13);
}
