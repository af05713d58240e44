#pragma once

#include <cstdint>
#include <vector>

#include "sinebeta/pointproc.hpp"

namespace sinebeta {

// Finite-volume conditional law on Lambda = [-lambda, lambda] given the configuration gamma.
// gamma's window must contain [-p, p]; its points in Lambda fix the particle number.
struct GibbsSpec {
    double beta = 2.0;
    double lambda = 1.0;
    PointConfiguration gamma;
    double p = 0.0;  // truncation of the exterior interaction; 0 means the largest symmetric window
    // optional discretization: when non-empty, particles live on these sites of Lambda
    std::vector<double> sites;

    double truncation() const;
    PointConfiguration interior() const;  // gamma restricted to Lambda
};

// (1/2) iint_{Lambda^2 minus diagonal} -log|x - y| (d eta - dx)(d eta - dy)
double interior_energy(const PointConfiguration& eta, double lambda);

// Potential felt at y in Lambda from (gamma - dx) on [-p, p] minus Lambda.
double exterior_potential(const GibbsSpec& spec, double y, double p);

// int_{[-p,p] minus Lambda} int_Lambda -log|x - y| (d eta(y) - d gamma_Lambda(y)) (d gamma(x) - dx)
double move_energy(const PointConfiguration& eta, const GibbsSpec& spec);
double move_energy(const PointConfiguration& eta, const GibbsSpec& spec, double p);

struct MoveEnergyReport {
    std::vector<double> p;       // truncations 2, 4, 8 times lambda that fit in the window
    std::vector<double> value;
    std::vector<double> cauchy;  // |value[i+1] - value[i]|
};
MoveEnergyReport move_energy_convergence(const PointConfiguration& eta, const GibbsSpec& spec);

// H_tilde + M_tilde
double total_energy(const PointConfiguration& eta, const GibbsSpec& spec);

struct GibbsRun {
    std::vector<PointConfiguration> samples;
    std::uint64_t proposed = 0, accepted = 0;
    double acceptance_rate = 0.0;
    double final_energy = 0.0;
    // max |running energy - recomputed energy| over the checkpoints
    double energy_drift = 0.0;
};

// Single-site Metropolis with uniform replacement in Lambda (or uniform over spec.sites).
// Starts from gamma's interior (snapped to the nearest free sites when discretized);
// records a sample every `thin` steps.
GibbsRun gibbs_mcmc(const GibbsSpec& spec, std::uint64_t steps, std::uint64_t seed,
                    std::uint64_t thin = 1);

// Exact analysis of the discretized chain: states are increasing index tuples of spec.sites.
struct DiscreteGibbsLaw {
    std::vector<std::vector<int>> states;
    std::vector<double> weights;  // normalized exp(-beta E)
};
DiscreteGibbsLaw enumerate_discrete_law(const GibbsSpec& spec);
// Transition matrix of the implemented discrete chain on the enumerated states (row-stochastic).
std::vector<std::vector<double>> discrete_transition_matrix(const GibbsSpec& spec,
                                                            const DiscreteGibbsLaw& law);
// empirical law of samples over the enumerated states
std::vector<double> empirical_discrete_law(const GibbsSpec& spec, const DiscreteGibbsLaw& law,
                                           const std::vector<PointConfiguration>& samples);

}  // namespace sinebeta
