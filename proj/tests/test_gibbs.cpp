#include <doctest.h>

#include <cmath>

#include "sinebeta/errors.hpp"
#include "sinebeta/gibbs.hpp"
#include "sinebeta/quadrature.hpp"
#include "sinebeta/stats.hpp"

using namespace sinebeta;

namespace {

// int_lo^hi -log|p - y| dy
double lebesgue_potential(double p, double lo, double hi) {
    auto G = [](double u) { return u == 0.0 ? 0.0 : -(u * std::log(std::abs(u)) - u); };
    return G(hi - p) - G(lo - p);
}

// half-integer exterior on [-41, 41] plus two interior points; 16 sites in Lambda = [-8, 8]
GibbsSpec toy_spec() {
    const double L = 8.0;
    std::vector<double> g;
    for (int k = -41; k <= 40; ++k)
        if (std::abs(k + 0.5) > L) g.push_back(k + 0.5);
    g.push_back(-3.3);
    g.push_back(2.1);
    std::sort(g.begin(), g.end());
    GibbsSpec spec;
    spec.beta = 2.0;
    spec.lambda = L;
    spec.gamma = PointConfiguration(g, -41, 41);
    for (int k = 0; k < 16; ++k) spec.sites.push_back(-L + (k + 0.5) * 2 * L / 16);
    return spec;
}

}  // namespace

TEST_CASE("interior energy") {
    CHECK(interior_energy(PointConfiguration({}, -1, 1), 1.0) == doctest::Approx(2 * (1.5 - std::log(2.0))).epsilon(1e-12));
    for (double a : {0.1, 0.5, 0.99}) {
        const double L = 1.0;
        const double pp = -2 * std::log(2 * a);
        const double pl = 2 * lebesgue_potential(a, -L, L);
        const double ll = 4 * (1.5 - std::log(2.0));
        CHECK(std::abs(interior_energy(PointConfiguration({-a, a}, -1, 1), 1.0) - 0.5 * (pp - 2 * pl + ll)) <= 1e-9);
    }
    // continuity in a: second differences on a fine sweep stay small (no jumps)
    std::vector<double> e;
    for (int i = 0; i <= 100; ++i) {
        const double a = 5.0 + 4.0 * i / 100;
        e.push_back(interior_energy(PointConfiguration({-a, a}, -10, 10), 10.0));
    }
    for (std::size_t i = 2; i < e.size(); ++i) CHECK(std::abs(e[i] - 2 * e[i - 1] + e[i - 2]) < 1e-2);
    CHECK_THROWS_AS(interior_energy(PointConfiguration({0.2, 0.2}, -1, 1), 1.0), CoincidentPoints);
}

TEST_CASE("move energy") {
    const double L = 2.5, P = 12.0;
    std::vector<double> g;
    for (int k = -12; k <= 12; ++k) g.push_back(k);
    GibbsSpec spec;
    spec.lambda = L;
    spec.gamma = PointConfiguration(g, -P, P);
    const auto inside = spec.interior();
    CHECK(inside.size() == 5);
    CHECK(move_energy(inside, spec) == 0.0);

    const PointConfiguration eta({-2.0, -1.0, 0.3, 1.0, 2.0}, -L, L);
    auto V = [&](double y) {
        double v = 0.0;
        for (double x : g)
            if (std::abs(x) > L) v -= std::log(std::abs(x - y));
        auto f = [&](double x) { return -std::log(std::abs(x - y)); };
        v -= quad::adaptive(f, -P, -L, {1e-15, 1e-14}) + quad::adaptive(f, L, P, {1e-15, 1e-14});
        return v;
    };
    const double oracle = V(0.3) - V(0.0);
    CHECK(std::abs(move_energy(eta, spec) - oracle) <= 1e-8);

    // exchanging eta and gamma_Lambda flips the sign
    std::vector<double> g2;
    for (double x : g)
        if (std::abs(x) > L) g2.push_back(x);
    for (double x : eta.points()) g2.push_back(x);
    std::sort(g2.begin(), g2.end());
    GibbsSpec swapped = spec;
    swapped.gamma = PointConfiguration(g2, -P, P);
    CHECK(std::abs(move_energy(inside, swapped) + move_energy(eta, spec)) <= 1e-10);

    CHECK_THROWS_AS(move_energy(eta, spec, 13.0), TruncationExceedsWindow);
    CHECK_THROWS_AS(move_energy(PointConfiguration({0.0}, -L, L), spec), InvalidArgument);

    const auto rep = move_energy_convergence(eta, spec);
    CHECK(rep.p.size() == 2);
    CHECK(rep.cauchy.size() == 1);
}

TEST_CASE("beta = 0 samples the Bernoulli reference") {
    GibbsSpec spec;
    spec.beta = 0.0;
    spec.lambda = 5.0;
    spec.gamma = PointConfiguration({-1.0, 0.5, 3.0}, -5, 5);
    const auto run = gibbs_mcmc(spec, 500000, 21, 50);
    CHECK(run.samples.size() == 10000);
    CHECK(run.acceptance_rate == 1.0);
    std::vector<double> pooled;
    for (const auto& s : run.samples) {
        CHECK(s.size() == 3);
        pooled.insert(pooled.end(), s.points().begin(), s.points().end());
    }
    const auto ks = stats::ks_one_sample(pooled, [](double x) { return std::clamp((x + 5) / 10, 0.0, 1.0); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("discretized chain") {
    const auto spec = toy_spec();
    const auto law = enumerate_discrete_law(spec);
    CHECK(law.states.size() == 120);
    const auto P = discrete_transition_matrix(spec, law);
    double balance = 0.0, rows = 0.0;
    for (std::size_t a = 0; a < P.size(); ++a) {
        double r = 0.0;
        for (std::size_t b = 0; b < P.size(); ++b) {
            r += P[a][b];
            balance = std::max(balance, std::abs(law.weights[a] * P[a][b] - law.weights[b] * P[b][a]));
        }
        rows = std::max(rows, std::abs(r - 1));
    }
    CHECK(balance <= 1e-15);
    CHECK(rows <= 1e-12);

    const auto run = gibbs_mcmc(spec, 1000000, 7, 1);
    const auto emp = empirical_discrete_law(spec, law, run.samples);
    double tv = 0.0;
    for (std::size_t i = 0; i < emp.size(); ++i) tv += 0.5 * std::abs(emp[i] - law.weights[i]);
    CHECK(tv <= 0.02);
    CHECK(run.energy_drift <= 1e-8);
}

TEST_CASE("continuous chain bookkeeping and determinism") {
    auto spec = toy_spec();
    spec.sites.clear();
    const auto a = gibbs_mcmc(spec, 50000, 3, 10);
    const auto b = gibbs_mcmc(spec, 50000, 3, 10);
    CHECK(a.samples.size() == 5000);
    CHECK(a.samples == b.samples);
    CHECK(a.energy_drift <= 1e-8);
    CHECK(a.acceptance_rate > 0.0);
    CHECK(a.acceptance_rate < 1.0);
    for (const auto& s : a.samples) {
        CHECK(s.size() == 2);
        CHECK(s.points().front() >= -8.0);
        CHECK(s.points().back() <= 8.0);
    }
    CHECK(std::abs(a.final_energy - total_energy(a.samples.back(), spec)) <= 1e-8);
}
