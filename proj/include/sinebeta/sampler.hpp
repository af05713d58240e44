#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sinebeta/pointproc.hpp"

namespace sinebeta {

// Independent stream for (seed, replica), derived with SplitMix64.
std::mt19937_64 replica_rng(std::uint64_t seed, std::uint64_t replica);

// Symmetric tridiagonal matrix with diagonal N(0, 1/beta) and off-diagonal chi_{beta (n-k)} / sqrt(2 beta),
// k = 1..n-1. Its eigenvalues have joint density proportional to
//   prod_{i<j} |x_i - x_j|^beta exp(-beta sum x_i^2 / 2),
// with equilibrium density sqrt(2n - x^2) / pi on [-sqrt(2n), sqrt(2n)].
struct TridiagonalModel {
    std::size_t n = 1;
    double beta = 2.0;
    std::vector<double> diag;
    std::vector<double> offdiag;  // size n - 1, strictly positive

    static TridiagonalModel sample(std::size_t n, double beta, std::mt19937_64& rng);
    // Gershgorin bound on the spectral radius
    double radius() const;
    // number of eigenvalues strictly below x
    std::size_t sturm_count(double x) const;
    // eigenvalues in [lo, hi), ascending, to absolute accuracy tol
    std::vector<double> eigenvalues_in(double lo, double hi, double tol) const;
    // all eigenvalues, to 1e-10 times the spectral radius
    std::vector<double> eigenvalues() const;
};

// Semicircle prediction for the density of eigenvalues at 0: sqrt(2n) / pi.
double semicircle_density_at_zero(std::size_t n);
// Half-width of the support after rescaling by the density at 0: 2n / pi.
double rescaled_support_half_width(std::size_t n);

// all eigenvalues, sorted
std::vector<double> sample_tridiagonal_eigs(std::size_t n, double beta, std::uint64_t seed);

struct BulkSample {
    PointConfiguration config;
    std::size_t n_source = 0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    double window_fraction = 0.0;
    double density = 0.0;
};

// Multiplies by density and keeps points with |x| <= window_fraction * support_half_width.
// Throws InsufficientBulk when the window is not covered by the input.
BulkSample rescale_bulk(const std::vector<double>& eigs, double window_fraction, double density,
                        double support_half_width);

struct BulkCalibration {
    double density = 0.0;        // measured at 0
    double density_error = 0.0;  // standard error
    double semicircle = 0.0;     // prediction
    double interval = 0.0;       // half-width of the counting interval in matrix units
    std::size_t replicas = 0;
};
// Mean eigenvalue count in [-a, a] over pilot replicas, divided by 2a and corrected by the
// semicircle shape factor; a is chosen to hold about `target_count` eigenvalues.
BulkCalibration calibrate_bulk_density(std::size_t n, double beta, std::uint64_t seed,
                                       std::size_t replicas, double target_count = 100.0);

// One replica: samples the matrix, computes only the eigenvalues in the bulk window and rescales.
BulkSample sample_bulk(std::size_t n, double beta, std::uint64_t seed, std::uint64_t replica,
                       double window_fraction, double density);

}  // namespace sinebeta
