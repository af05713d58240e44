#include <doctest.h>

#include <cmath>
#include <random>

#include "sinebeta/stats.hpp"

using namespace sinebeta;

TEST_CASE("moments") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(stats::mean(x) == 2.5);
    CHECK(stats::variance(x) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(stats::normal_cdf(0.0) == 0.5);
    CHECK(stats::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
}

TEST_CASE("Kolmogorov distribution") {
    CHECK(stats::kolmogorov_survival(0.0) == 1.0);
    CHECK(stats::kolmogorov_survival(1.3580986393225505) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(stats::kolmogorov_survival(1.6276236115189293) == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(stats::kolmogorov_survival(10.0) < 1e-80);
}

TEST_CASE("KS tests") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    std::vector<double> a(2000), b(2000), shifted(2000);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    for (auto& v : shifted) v = g(rng) + 0.3;
    CHECK(stats::ks_one_sample(a, stats::normal_cdf).p_value > 0.01);
    CHECK(stats::ks_one_sample(shifted, stats::normal_cdf).p_value < 1e-6);
    CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
    CHECK(stats::ks_two_sample(a, shifted).p_value < 1e-6);
    // single point at the median: D = 1/2
    CHECK(stats::ks_one_sample({0.0}, stats::normal_cdf).statistic == 0.5);
}

TEST_CASE("Spearman") {
    const std::vector<double> x{4, 8, 16, 32}, down{0.14, 0.08, 0.04, 0.02}, up{1, 2, 3, 4};
    const auto r = stats::spearman(x, down);
    CHECK(r.rho == -1.0);
    CHECK(r.p_negative == doctest::Approx(1.0 / 24).epsilon(1e-12));
    CHECK(stats::spearman(x, up).rho == 1.0);
    CHECK(stats::spearman(x, up).p_negative == 1.0);
    const std::vector<double> big_x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<double> big_y(big_x.rbegin(), big_x.rend());
    CHECK(stats::spearman(big_x, big_y).p_negative < 0.001);
}

TEST_CASE("bootstrap and jackknife") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 2.0);
    std::vector<double> x(4000);
    for (auto& v : x) v = g(rng);
    const stats::Statistic mean = [](std::span<const double> v) { return stats::mean(v); };
    const auto b = stats::bootstrap(x, mean, 1000, 1);
    const auto b2 = stats::bootstrap(x, mean, 1000, 1);
    CHECK(b.se == b2.se);
    CHECK(b.estimate == stats::mean(x));
    CHECK(b.se == doctest::Approx(2.0 / std::sqrt(4000.0)).epsilon(0.1));
    CHECK(b.lo < b.estimate);
    CHECK(b.hi > b.estimate);
    const auto j = stats::jackknife(x, mean);
    // for the mean the jackknife SE equals the usual standard error
    CHECK(j.se == doctest::Approx(std::sqrt(stats::variance(x) / 4000)).epsilon(1e-9));
}
