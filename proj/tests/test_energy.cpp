#include <doctest.h>

#include <cmath>

#include "sinebeta/energy.hpp"
#include "sinebeta/errors.hpp"

using namespace sinebeta;

namespace {

// int_lo^hi -log|p - y| dy from the antiderivative of -log|u|
double lebesgue_potential(double p, double lo, double hi) {
    auto G = [](double u) { return u == 0.0 ? 0.0 : -(u * std::log(std::abs(u)) - u); };
    return G(hi - p) - G(lo - p);
}

}  // namespace

TEST_CASE("atom pairs") {
    const auto a = SignedMeasure::points({0.0, 1.0});
    CHECK(interaction_energy(a, a, -5, 5) == 0.0);
    const auto b = SignedMeasure::points({0.0, 2.0});
    CHECK(interaction_energy(b, b, -5, 5) == doctest::Approx(-2 * std::log(2.0)).epsilon(1e-15));
    const auto left = SignedMeasure::points({0.0}), right = SignedMeasure::points({2.0});
    CHECK(interaction_energy(left, right, -5, 5) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("coincident atoms") {
    const auto a = SignedMeasure::points({0.5, 0.5});
    CHECK_THROWS_AS(interaction_energy(a, SignedMeasure::points({3.0}), -5, 5), CoincidentPoints);
    const auto b = SignedMeasure::points({0.5});
    CHECK(interaction_energy(b, b, -5, 5) == 0.0);
    CHECK_THROWS_AS(interaction_energy(b, b, -5, 5, false), CoincidentPoints);
}

TEST_CASE("atoms against Lebesgue") {
    const std::vector<double> atoms{-1.0, 0.5, 2.0};
    const auto a = SignedMeasure::points(atoms);
    const auto leb = SignedMeasure::lebesgue(-3, 3);
    double expect = 0.0;
    for (double p : atoms) {
        expect += lebesgue_potential(p, -3, 3);
        CHECK(std::abs(log_potential(leb, p, -3, 3) - lebesgue_potential(p, -3, 3)) <= 1e-10);
    }
    CHECK(std::abs(interaction_energy(a, leb, -3, 3) - expect) <= 1e-10);
    CHECK(std::abs(interaction_energy(leb, a, -3, 3) - expect) <= 1e-10);
}

TEST_CASE("density routes agree with closed forms") {
    // Lebesgue written as a generic density
    const auto d = SignedMeasure::density([](double) { return 1.0; }, -3, 3);
    const auto leb = SignedMeasure::lebesgue(-3, 3);
    for (double x : {-3.0, -1.0, 0.2, 3.0, 7.0})
        CHECK(std::abs(log_potential(d, x, -3, 3) - log_potential(leb, x, -3, 3)) <= 1e-10);
    // self energy of Lebesgue on [0, L]: L^2 (3/2 - log L)
    const double L = 6.0, self = L * L * (1.5 - std::log(L));
    CHECK(std::abs(interaction_energy(leb, leb, -3, 3) - self) <= 1e-10 * std::abs(self));
    CHECK(std::abs(interaction_energy(d, leb, -3, 3) - self) <= 1e-8 * std::abs(self));
}

TEST_CASE("bilinearity") {
    const auto a = SignedMeasure::points({-1.0, 0.5, 2.0});
    const auto leb = SignedMeasure::lebesgue(-3, 3, -1.0);
    const auto sum = a + leb;
    const double direct = interaction_energy(sum, sum, -3, 3);
    const double parts = interaction_energy(a, a, -3, 3) + 2 * interaction_energy(a, leb, -3, 3) +
                         interaction_energy(leb, leb, -3, 3);
    CHECK(std::abs(direct - parts) <= 1e-10 * std::abs(parts));
}
