#include <doctest.h>

#include <cmath>
#include <random>

#include "sinebeta/errors.hpp"
#include "sinebeta/sampler.hpp"
#include "sinebeta/stats.hpp"

using namespace sinebeta;

namespace {

// sign changes of the leading principal minors of T - x, computed without safeguards
std::size_t charpoly_sign_count(const TridiagonalModel& T, double x) {
    double prev = 1.0, cur = T.diag[0] - x;
    std::size_t changes = cur < 0;
    for (std::size_t k = 1; k < T.n; ++k) {
        const double next = (T.diag[k] - x) * cur - T.offdiag[k - 1] * T.offdiag[k - 1] * prev;
        changes += (next < 0) != (cur < 0);
        prev = cur;
        cur = next;
    }
    return changes;
}

}  // namespace

TEST_CASE("n = 1 is a Gaussian with variance 1 / beta") {
    for (double beta : {1.0, 2.0, 4.0}) {
        const int N = 100000;
        std::vector<double> x(N);
        for (int i = 0; i < N; ++i) {
            auto rng = replica_rng(17, i);
            x[i] = TridiagonalModel::sample(1, beta, rng).eigenvalues()[0];
        }
        const double target = 1.0 / beta;
        CHECK(std::abs(stats::mean(x)) <= 3 * std::sqrt(target / N));
        CHECK(std::abs(stats::variance(x) - target) <= 3 * target * std::sqrt(2.0 / (N - 1)));
    }
}

TEST_CASE("n = 2, beta = 2 spacing against rejection sampling") {
    // spacing d = x1 - x2 has density proportional to d^2 exp(-d^2 / 2)
    const int N = 10000;
    std::vector<double> direct(N), oracle;
    for (int i = 0; i < N; ++i) {
        const auto e = sample_tridiagonal_eigs(2, 2.0, 1000 + i);
        direct[i] = e[1] - e[0];
    }
    std::mt19937_64 rng(99);
    std::normal_distribution<double> prop(0.0, 2.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double bound = (8.0 / 3.0) * std::exp(-1.0);
    while (oracle.size() < static_cast<std::size_t>(N)) {
        const double d = prop(rng);
        if (u(rng) * bound <= d * d * std::exp(-3 * d * d / 8)) oracle.push_back(std::abs(d));
    }
    CHECK(stats::ks_two_sample(direct, oracle).p_value > 0.01);
}

TEST_CASE("eigenvalue count, order and determinism") {
    for (std::size_t n : {1u, 2u, 7u, 100u, 333u}) {
        const auto e = sample_tridiagonal_eigs(n, 2.0, 5);
        CHECK(e.size() == n);
        CHECK(std::is_sorted(e.begin(), e.end()));
        CHECK(e == sample_tridiagonal_eigs(n, 2.0, 5));
    }
    CHECK(sample_tridiagonal_eigs(50, 1.0, 5) != sample_tridiagonal_eigs(50, 1.0, 6));
    auto rng = replica_rng(3, 0);
    const auto T = TridiagonalModel::sample(200, 0.7, rng);
    for (double b : T.offdiag) CHECK(b > 0.0);
}

TEST_CASE("trace and Frobenius norm are preserved") {
    auto rng = replica_rng(8, 1);
    const auto T = TridiagonalModel::sample(64, 2.0, rng);
    const auto e = T.eigenvalues();
    double tr = 0.0, fr = 0.0, s1 = 0.0, s2 = 0.0;
    for (double d : T.diag) tr += d, fr += d * d;
    for (double b : T.offdiag) fr += 2 * b * b;
    for (double x : e) s1 += x, s2 += x * x;
    CHECK(std::abs(s1 - tr) <= 1e-8 * T.radius());
    CHECK(std::abs(s2 - fr) <= 1e-8 * fr);
}

TEST_CASE("Sturm counts against the characteristic polynomial") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto rng = replica_rng(seed, 2);
        const auto T = TridiagonalModel::sample(64, 2.0, rng);
        const auto e = T.eigenvalues();
        std::uniform_real_distribution<double> u(-T.radius(), T.radius());
        for (int i = 0; i < 200; ++i) {
            const double x = u(rng);
            const auto naive = charpoly_sign_count(T, x);
            CHECK(T.sturm_count(x) == naive);
            CHECK(static_cast<std::size_t>(std::lower_bound(e.begin(), e.end(), x) - e.begin()) == naive);
        }
        const auto part = T.eigenvalues_in(-2.0, 3.0, 1e-12);
        CHECK(part.size() == T.sturm_count(3.0) - T.sturm_count(-2.0));
    }
}

TEST_CASE("rescaling of synthetic input") {
    const double rho = 3.0;
    std::vector<double> eigs;
    for (int k = -300; k <= 300; ++k) eigs.push_back(k / rho);
    const auto b = rescale_bulk(eigs, 0.5, rho, 100.0);
    CHECK(b.config.window_lo() == -50.0);
    CHECK(b.config.window_hi() == 50.0);
    CHECK(b.config.size() == 101);
    for (std::size_t i = 0; i < b.config.size(); ++i)
        CHECK(b.config.points()[i] == doctest::Approx(-50.0 + i).epsilon(1e-14));
    CHECK_THROWS_AS(rescale_bulk(eigs, 0.5, rho, 1000.0), InsufficientBulk);
}

TEST_CASE("bulk intensity is one") {
    const std::size_t n = 4096;
    const auto cal = calibrate_bulk_density(n, 2.0, 1, 200);
    CHECK(std::abs(cal.density / cal.semicircle - 1) < 0.01);
    double count = 0.0, length = 0.0;
    std::vector<double> mirror;
    for (int r = 0; r < 200; ++r) {
        const auto b = sample_bulk(n, 2.0, 1, r, 0.02, cal.density);
        const double h = b.config.window_hi() / 2;
        count += b.config.count(-h, h);
        length += 2 * h;
        for (double x : b.config.points())
            if (std::abs(x) < h) mirror.push_back(x);
    }
    CHECK(std::abs(count / length - 1) <= 0.03);
    // symmetry about 0 within Monte Carlo error
    std::vector<double> neg;
    for (double x : mirror) neg.push_back(-x);
    CHECK(stats::ks_two_sample(mirror, neg).p_value > 0.01);
}
