// Runs the fifteen acceptance checks and prints one PASS/FAIL line per check.
// Optional arguments restrict the run to the listed check numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "sinebeta/gibbs.hpp"
#include "sinebeta/harness.hpp"
#include "sinebeta/perturb.hpp"
#include "sinebeta/pointproc.hpp"
#include "sinebeta/sampler.hpp"
#include "sinebeta/singular.hpp"
#include "sinebeta/stats.hpp"
#include "sinebeta/transport.hpp"

using namespace sinebeta;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

PointConfiguration random_points(double lambda, int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-lambda, lambda);
    std::vector<double> pts(n);
    for (auto& p : pts) p = u(rng);
    std::sort(pts.begin(), pts.end());
    return {pts, -lambda, lambda};
}

const double kNormBump = 0.0285378122676817;

std::map<double, CLTReport>& clt_runs() {
    static std::map<double, CLTReport> runs;
    return runs;
}

const CLTReport& clt_run(double beta) {
    auto& runs = clt_runs();
    auto it = runs.find(beta);
    if (it == runs.end()) {
        ExperimentConfig c;
        c.beta = beta;
        it = runs.emplace(beta, run_clt_experiment(c)).first;
    }
    return it->second;
}

std::shared_ptr<const PerturbationBundle> bundle400() {
    static const auto b = std::make_shared<const PerturbationBundle>(
        400.0, RescaledTestFunction(make_bump(), 20.0), ScaleMode::relaxed);
    return b;
}

Outcome clt_variance() {
    Outcome o{true, ""};
    for (double beta : {1.0, 2.0, 4.0}) {
        const auto& r = clt_run(beta);
        const bool norm_ok = std::abs(r.norm_sq - kNormBump) <= 1e-9 * kNormBump;
        const bool var_ok = r.variance_rel_error <= 0.15;
        const bool mean_ok = std::abs(r.mean) <= 3 * r.mean_se;
        o.pass = o.pass && norm_ok && var_ok && mean_ok;
        o.detail += fmt("beta=%g var=%.5f target=%.5f rel=%.3f mean=%.4f se=%.4f; ", beta, r.variance,
                        r.target_variance, r.variance_rel_error, r.mean, r.mean_se);
    }
    return o;
}

Outcome gaussianity() {
    const auto& r = clt_run(2.0);
    const double p = r.ks_p_value.value_or(0.0);
    return {p > 0.01, fmt("KS D=%.4f p=%.4f", r.ks_statistic.value_or(NAN), p)};
}

Outcome laplace_transform() {
    const auto& r = clt_run(2.0);
    bool ok = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < r.mgf.t.size(); ++i) {
        if (std::abs(r.mgf.t[i]) > 0.5) continue;
        const double target = r.mgf.t[i] * r.mgf.t[i] / 2.0 * r.norm_sq;
        ok = ok && target >= r.mgf.band_lo[i] && target <= r.mgf.band_hi[i];
        if (r.mgf.se[i] > 0) worst = std::max(worst, std::abs(r.mgf.log_mgf[i] - target) / r.mgf.se[i]);
    }
    return {ok, fmt("max |log-MGF - target| / se = %.2f (band 3 se)", worst)};
}

Outcome airfoil() {
    const auto& b = *bundle400();
    const double h = 0.05;
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -390.0 + 780.0 * i / 400;
        const double d = (b.lp(x + h) - b.lp(x - h)) / (2 * h);
        worst = std::max(worst, std::abs(d - b.phi().eval(1, x)));
    }
    return {worst <= 1e-4, fmt("max |LP' - phi'| = %.3g", worst)};
}

Outcome mass_and_construction() {
    const auto& b = *bundle400();
    const double mass = std::abs(b.total_mass_m());
    double strip = 0.0;
    for (auto side : {Side::left, Side::right})
        strip = std::max(strip, std::abs(b.strip_mass_m(side) - b.strip_mass_m_tilde(side)));
    double junction = 0.0;
    const double h = 1e-3;
    for (double x : b.junctions())
        for (int k = 0; k <= 2; ++k) {
            auto f = [&](double y) { return b.m_tilde(y, k); };
            const double left = k == 0 ? f(x - h) : (f(x - h) - f(x - 2 * h)) / h;
            const double right = k == 0 ? f(x + h) : (f(x + 2 * h) - f(x + h)) / h;
            junction = std::max(junction, std::abs(left - right) / std::max(1.0, std::abs(f(x))));
        }
    return {mass <= 1e-6 && strip <= 1e-8 && junction <= 1e-6,
            fmt("|int m| = %.3g, strip mass gap = %.3g, junction gap = %.3g", mass, strip, junction)};
}

Outcome weighted_pv() {
    double worst = 0.0;
    for (double L : {100.0, 400.0})
        for (int i = 0; i < 50; ++i) worst = std::max(worst, std::abs(weighted_pv_zero_identity(L, -L + 2 * L * (i + 0.5) / 50)));
    return {worst <= 1e-8, fmt("max |residual| = %.3g", worst)};
}

Outcome energy_identity(bool expansion) {
    const TransportBundle T(bundle400(), s_max(*bundle400()) / 2);
    std::mt19937_64 rng(expansion ? 808 : 707);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto eta = random_points(400.0, 20, rng);
        const auto r = expansion ? verify_energy_expansion(T, eta) : verify_energy_splitting(T, eta);
        worst = std::max(worst, std::abs(r.residual) / std::max(std::abs(r.lhs), 1.0));
        if (!expansion)
            worst = std::max(worst, std::abs(r.terms.at("residual_corrections_only")) / std::max(std::abs(r.lhs), 1.0));
    }
    return {worst <= 1e-5, fmt("max relative residual = %.3g", worst)};
}

Outcome difference_field_check() {
    const TransportBundle T(bundle400(), s_max(*bundle400()) / 2);
    std::mt19937_64 rng(909);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const auto eta = random_points(400.0, 20, rng);
        for (double x : {600.0, 800.0, -600.0, -800.0})
            worst = std::max(worst, std::abs(difference_field(T, eta, x).residual));
    }
    return {worst <= 1e-7, fmt("max |residual| = %.3g", worst)};
}

Outcome variance_convergence() {
    auto errvar = [](double L) {
        return variance_term(PerturbationBundle(L, RescaledTestFunction(make_bump(), 10.0), ScaleMode::relaxed)).errvar;
    };
    const double a = errvar(400.0), b = errvar(800.0), r = std::abs(a) / std::abs(b);
    return {r >= 2.5 && r <= 6.0, fmt("errvar(400) = %.4g, errvar(800) = %.4g, ratio = %.3f", a, b, r)};
}

Outcome transport_correctness() {
    const TransportBundle T(bundle400(), s_max(*bundle400()) / 2);
    const auto pf = push_forward_check(T, RescaledTestFunction(make_bump(), 20.0, 30.0));
    const auto pb = psi_bounds_check(T);
    bool strips = true;
    const double L = T.lambda(), l = T.ell();
    for (int i = 0; i <= 100; ++i) {
        const double x = L - l / 4 + (l / 4) * i / 100;
        strips = strips && T.map(x) == x && T.map(-x) == -x;
    }
    return {pf.relative <= 1e-8 && strips && pb.identity_on_strips && pb.sup_psi <= 1.0,
            fmt("push-forward rel = %.3g, identity on strips = %s, sup psi = %.4g", pf.relative,
                strips && pb.identity_on_strips ? "yes" : "no", pb.sup_psi)};
}

Outcome apriori_bound() {
    std::mt19937_64 rng(1212);
    int violations = 0, checks = 0;
    double tightest = 0.0;
    for (const char* name : {"bump", "flat_bump", "odd_bump"}) {
        const RescaledTestFunction g(builtin_test_function(name), 5.0, 2.0);
        for (int t = 0; t < 50; ++t) {
            const auto c = random_points(30.0, 60, rng);
            const double f = std::abs(fluct(g, c));
            for (auto flavor : {BoundFlavor::center, BoundFlavor::left, BoundFlavor::right}) {
                const double rhs = apriori_bound_rhs(g, c, flavor, 20.0);
                ++checks;
                violations += f > rhs;
                if (rhs > 0) tightest = std::max(tightest, f / rhs);
            }
        }
    }
    return {violations == 0, fmt("%d of %d checks violated, max |fluct| / bound = %.3f", violations, checks, tightest)};
}

Outcome discrepancy_sublinear() {
    const auto& r = clt_run(2.0);
    bool decreasing = true;
    std::string rows;
    for (std::size_t i = 0; i < r.discrepancy.size(); ++i) {
        if (i > 0) decreasing = decreasing && r.discrepancy[i].var_over_r < r.discrepancy[i - 1].var_over_r;
        rows += fmt("%.4f ", r.discrepancy[i].var_over_r);
    }
    return {decreasing && r.spearman_rho < 0 && r.spearman_p < 0.05,
            "Var/R = " + rows + fmt("rho = %.3f p = %.4f", r.spearman_rho, r.spearman_p)};
}

Outcome gibbs_sampler() {
    GibbsSpec flat;
    flat.beta = 0.0;
    flat.lambda = 5.0;
    flat.gamma = PointConfiguration({-1.0, 0.5, 3.0}, -5, 5);
    const auto run0 = gibbs_mcmc(flat, 500000, 21, 50);
    std::vector<double> pooled;
    for (const auto& s : run0.samples) pooled.insert(pooled.end(), s.points().begin(), s.points().end());
    const auto ks = stats::ks_one_sample(pooled, [](double x) { return std::clamp((x + 5) / 10, 0.0, 1.0); });

    const double L = 8.0;
    std::vector<double> g;
    for (int k = -41; k <= 40; ++k)
        if (std::abs(k + 0.5) > L) g.push_back(k + 0.5);
    g.push_back(-3.3);
    g.push_back(2.1);
    std::sort(g.begin(), g.end());
    GibbsSpec toy;
    toy.beta = 2.0;
    toy.lambda = L;
    toy.gamma = PointConfiguration(g, -41, 41);
    for (int k = 0; k < 16; ++k) toy.sites.push_back(-L + (k + 0.5) * 2 * L / 16);
    const auto law = enumerate_discrete_law(toy);
    const auto run = gibbs_mcmc(toy, 1000000, 7, 1);
    const auto emp = empirical_discrete_law(toy, law, run.samples);
    double tv = 0.0;
    for (std::size_t i = 0; i < emp.size(); ++i) tv += 0.5 * std::abs(emp[i] - law.weights[i]);
    return {ks.p_value > 0.01 && tv <= 0.02, fmt("beta=0 KS p = %.4f, toy TV = %.4f", ks.p_value, tv)};
}

Outcome sampler_calibration() {
    const int N = 10000;
    std::vector<double> direct(N), oracle;
    for (int i = 0; i < N; ++i) {
        const auto e = sample_tridiagonal_eigs(2, 2.0, 5000 + i);
        direct[i] = e[1] - e[0];
    }
    // spacing density proportional to d^2 exp(-d^2 / 2), proposal N(0, 4)
    std::mt19937_64 rng(31337);
    std::normal_distribution<double> prop(0.0, 2.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double bound = (8.0 / 3.0) * std::exp(-1.0);
    while (oracle.size() < static_cast<std::size_t>(N)) {
        const double d = prop(rng);
        if (u(rng) * bound <= d * d * std::exp(-3 * d * d / 8)) oracle.push_back(std::abs(d));
    }
    const auto ks = stats::ks_two_sample(direct, oracle);
    return {ks.p_value > 0.01, fmt("KS D = %.4f p = %.4f", ks.statistic, ks.p_value)};
}

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
        {"CLT variance and mean, beta in {1, 2, 4}", clt_variance},
        {"Gaussianity of standardized fluctuations", gaussianity},
        {"log-MGF within bootstrap bands for |t| <= 0.5", laplace_transform},
        {"airfoil identity LP' = phi'", airfoil},
        {"mass zero, strip masses, C2 junctions", mass_and_construction},
        {"weighted PV null identity", weighted_pv},
        {"energy splitting identity", [] { return energy_identity(false); }},
        {"energy expansion identity", [] { return energy_identity(true); }},
        {"difference field decomposition", difference_field_check},
        {"variance term error decay", variance_convergence},
        {"transport map correctness", transport_correctness},
        {"a-priori fluctuation bound", apriori_bound},
        {"discrepancy variance sublinear in R", discrepancy_sublinear},
        {"Gibbs sampler uniformity and exact law", gibbs_sampler},
        {"n = 2 spacing against rejection sampling", sampler_calibration},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.pass;
        std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, checks[i].first.c_str(),
                    o.detail.c_str(), secs);
    }
    return failures == 0 ? 0 : 1;
}
