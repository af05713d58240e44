#include "sinebeta/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "sinebeta/energy.hpp"
#include "sinebeta/errors.hpp"
#include "sinebeta/quadrature.hpp"

namespace sinebeta {

double GibbsSpec::truncation() const {
    return p > 0.0 ? p : std::min(-gamma.window_lo(), gamma.window_hi());
}

PointConfiguration GibbsSpec::interior() const { return gamma.restrict_to(-lambda, lambda); }

double interior_energy(const PointConfiguration& eta, double lambda) {
    const auto P = SignedMeasure::points(eta.restrict_to(-lambda, lambda).points());
    if (P.atoms.size() != eta.size())
        throw OutOfWindow("interior_energy: configuration has points outside [-lambda, lambda]");
    const auto L = SignedMeasure::lebesgue(-lambda, lambda);
    return 0.5 * (interaction_energy(P, P, -lambda, lambda) - 2 * interaction_energy(P, L, -lambda, lambda) +
                  interaction_energy(L, L, -lambda, lambda));
}

namespace {

void check_truncation(const GibbsSpec& spec, double p) {
    if (!(p >= spec.lambda))
        throw InvalidArgument("move_energy: truncation p must be at least lambda");
    if (-p < spec.gamma.window_lo() || p > spec.gamma.window_hi())
        throw TruncationExceedsWindow("move_energy: [-p, p] with p = " + quad::fmt_g(p) +
                                      " exceeds the window of gamma");
}

std::vector<double> exterior_points(const GibbsSpec& spec, double p) {
    std::vector<double> out;
    for (double x : spec.gamma.points())
        if (std::abs(x) > spec.lambda && std::abs(x) <= p) out.push_back(x);
    return out;
}

double potential_from(const std::vector<double>& ext, double lambda, double p, double y) {
    double v = 0.0;
    for (double x : ext) v -= std::log(std::abs(x - y));
    v -= quad::log_potential_interval(-p, -lambda, y) + quad::log_potential_interval(lambda, p, y);
    return v;
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace

double exterior_potential(const GibbsSpec& spec, double y, double p) {
    check_truncation(spec, p);
    return potential_from(exterior_points(spec, p), spec.lambda, p, y);
}

double move_energy(const PointConfiguration& eta, const GibbsSpec& spec, double p) {
    check_truncation(spec, p);
    const auto inner = spec.interior();
    if (eta.size() != inner.size())
        throw InvalidArgument("move_energy: eta must have as many points as gamma in Lambda");
    const auto ext = exterior_points(spec, p);
    double s = 0.0;
    for (double y : eta.points()) s += potential_from(ext, spec.lambda, p, y);
    for (double y : inner.points()) s -= potential_from(ext, spec.lambda, p, y);
    return s;
}

double move_energy(const PointConfiguration& eta, const GibbsSpec& spec) {
    return move_energy(eta, spec, spec.truncation());
}

MoveEnergyReport move_energy_convergence(const PointConfiguration& eta, const GibbsSpec& spec) {
    MoveEnergyReport r;
    const double pmax = std::min(-spec.gamma.window_lo(), spec.gamma.window_hi());
    for (double f : {2.0, 4.0, 8.0}) {
        const double p = f * spec.lambda;
        if (p > pmax) break;
        r.p.push_back(p);
        r.value.push_back(move_energy(eta, spec, p));
    }
    if (r.p.empty())
        throw TruncationExceedsWindow("move_energy_convergence: window of gamma narrower than 2 lambda");
    for (std::size_t i = 1; i < r.value.size(); ++i) r.cauchy.push_back(std::abs(r.value[i] - r.value[i - 1]));
    return r;
}

double total_energy(const PointConfiguration& eta, const GibbsSpec& spec) {
    return interior_energy(eta, spec.lambda) + move_energy(eta, spec);
}

GibbsRun gibbs_mcmc(const GibbsSpec& spec, std::uint64_t steps, std::uint64_t seed, std::uint64_t thin) {
    if (!(spec.lambda > 0.0)) throw InvalidArgument("gibbs_mcmc: lambda must be positive");
    if (!(spec.beta >= 0.0)) throw InvalidArgument("gibbs_mcmc: beta must be non-negative");
    if (thin == 0) throw InvalidArgument("gibbs_mcmc: thin must be positive");
    const double L = spec.lambda;
    const double p = spec.truncation();
    check_truncation(spec, p);
    const auto ext = exterior_points(spec, p);
    std::vector<double> x = spec.interior().points();
    const std::size_t n = x.size();
    if (n == 0) throw InvalidArgument("gibbs_mcmc: gamma has no points in Lambda");
    const bool discrete = !spec.sites.empty();
    std::vector<int> site_of;
    if (discrete) {
        if (spec.sites.size() < n) throw InvalidArgument("gibbs_mcmc: fewer sites than particles");
        for (double s : spec.sites)
            if (std::abs(s) > L) throw OutOfWindow("gibbs_mcmc: site outside Lambda");
        std::vector<bool> used(spec.sites.size(), false);
        for (double& xi : x) {
            int best = -1;
            for (std::size_t k = 0; k < spec.sites.size(); ++k)
                if (!used[k] && (best < 0 || std::abs(spec.sites[k] - xi) < std::abs(spec.sites[best] - xi)))
                    best = static_cast<int>(k);
            used[best] = true;
            xi = spec.sites[best];
            site_of.push_back(best);
        }
    }

    auto config = [&] { return PointConfiguration(x, -L, L); };
    auto full_energy = [&] {
        const auto c = config();
        double e = interior_energy(c, L);
        for (double y : x) e += potential_from(ext, L, p, y);
        return e;
    };
    // the reference term -sum V(gamma_Lambda) is constant and dropped from the running energy
    double energy = full_energy();
    std::vector<double> V(n);
    for (std::size_t i = 0; i < n; ++i) V[i] = potential_from(ext, L, p, x[i]);

    GibbsRun run;
    std::mt19937_64 rng(seed);
    const std::uint64_t checkpoint = std::max<std::uint64_t>(steps / 16, 1);
    std::vector<bool> occupied(spec.sites.size(), false);
    for (int k : site_of) occupied[k] = true;

    for (std::uint64_t step = 1; step <= steps; ++step) {
        const std::size_t i = uniform_index(rng, n);
        double b;
        int kb = -1;
        if (discrete) {
            kb = static_cast<int>(uniform_index(rng, spec.sites.size()));
            b = spec.sites[kb];
        } else {
            b = -L + 2 * L * u01(rng);
        }
        const double u = u01(rng);
        ++run.proposed;
        bool ok = true;
        if (discrete && occupied[kb] && kb != site_of[i]) ok = false;
        double dE = 0.0, vb = 0.0;
        if (ok && b != x[i]) {
            const double a = x[i];
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                if (x[j] == b) {
                    ok = false;
                    break;
                }
                dE += -std::log(std::abs(b - x[j])) + std::log(std::abs(a - x[j]));
            }
            if (ok) {
                dE -= quad::log_potential_interval(-L, L, b) - quad::log_potential_interval(-L, L, a);
                vb = potential_from(ext, L, p, b);
                dE += vb - V[i];
                ok = spec.beta == 0.0 || dE <= 0.0 || u < std::exp(-spec.beta * dE);
            }
            if (ok) {
                x[i] = b;
                V[i] = vb;
                energy += dE;
                if (discrete) {
                    occupied[site_of[i]] = false;
                    occupied[kb] = true;
                    site_of[i] = kb;
                }
            }
        }
        if (ok) ++run.accepted;
        if (step % thin == 0) run.samples.push_back(config());
        if (step % checkpoint == 0 || step == steps)
            run.energy_drift = std::max(run.energy_drift, std::abs(energy - full_energy()));
    }
    run.acceptance_rate = run.proposed ? static_cast<double>(run.accepted) / run.proposed : 0.0;
    const auto inner = spec.interior();
    run.final_energy = energy;
    for (double y : inner.points()) run.final_energy -= potential_from(ext, L, p, y);
    return run;
}

DiscreteGibbsLaw enumerate_discrete_law(const GibbsSpec& spec) {
    const std::size_t K = spec.sites.size();
    const std::size_t n = spec.interior().size();
    if (K == 0 || n == 0 || n > K) throw InvalidArgument("enumerate_discrete_law: need 1 <= n <= sites");
    double count = 1.0;
    for (std::size_t i = 0; i < n; ++i) count = count * static_cast<double>(K - i) / static_cast<double>(i + 1);
    if (count > 2e5) throw InvalidArgument("enumerate_discrete_law: state space too large");
    DiscreteGibbsLaw law;
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    std::vector<double> energy;
    while (true) {
        std::vector<double> pts;
        for (int k : idx) pts.push_back(spec.sites[k]);
        law.states.push_back(idx);
        energy.push_back(total_energy(PointConfiguration(pts, -spec.lambda, spec.lambda), spec));
        // next combination
        int i = static_cast<int>(n) - 1;
        while (i >= 0 && idx[i] == static_cast<int>(K - n) + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (std::size_t j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    const double emin = *std::min_element(energy.begin(), energy.end());
    double z = 0.0;
    for (double e : energy) {
        law.weights.push_back(std::exp(-spec.beta * (e - emin)));
        z += law.weights.back();
    }
    for (double& w : law.weights) w /= z;
    return law;
}

std::vector<std::vector<double>> discrete_transition_matrix(const GibbsSpec& spec,
                                                            const DiscreteGibbsLaw& law) {
    const std::size_t S = law.states.size(), K = spec.sites.size();
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < S; ++i) index[law.states[i]] = i;
    std::vector<std::vector<double>> P(S, std::vector<double>(S, 0.0));
    for (std::size_t a = 0; a < S; ++a) {
        const auto& st = law.states[a];
        const std::size_t n = st.size();
        const double q = 1.0 / static_cast<double>(n * K);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < K; ++k) {
                const int kk = static_cast<int>(k);
                if (std::find(st.begin(), st.end(), kk) != st.end()) {
                    P[a][a] += q;
                    continue;
                }
                auto nx = st;
                nx[i] = kk;
                std::sort(nx.begin(), nx.end());
                const std::size_t b = index.at(nx);
                // min(1, exp(-beta dE)) written through the normalized weights
                const double acc = std::min(1.0, law.weights[b] / law.weights[a]);
                P[a][b] += q * acc;
                P[a][a] += q * (1.0 - acc);
            }
    }
    return P;
}

std::vector<double> empirical_discrete_law(const GibbsSpec& spec, const DiscreteGibbsLaw& law,
                                           const std::vector<PointConfiguration>& samples) {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < law.states.size(); ++i) index[law.states[i]] = i;
    std::map<double, int> site_index;
    for (std::size_t k = 0; k < spec.sites.size(); ++k) site_index[spec.sites[k]] = static_cast<int>(k);
    std::vector<double> freq(law.states.size(), 0.0);
    for (const auto& c : samples) {
        std::vector<int> st;
        for (double x : c.points()) st.push_back(site_index.at(x));
        std::sort(st.begin(), st.end());
        freq[index.at(st)] += 1.0;
    }
    for (double& f : freq) f /= static_cast<double>(samples.size());
    return freq;
}

}  // namespace sinebeta
