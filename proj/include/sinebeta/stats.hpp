#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sinebeta::stats {

double mean(std::span<const double> x);
// unbiased sample variance
double variance(std::span<const double> x);
double normal_cdf(double x);

// P(K > t) for the Kolmogorov distribution
double kolmogorov_survival(double t);

struct KSResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
// one-sample test against a continuous cdf (Stephens' finite-n correction)
KSResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct SpearmanResult {
    double rho = 0.0;
    // one-sided p-value for a negative association; exact permutation distribution for n <= 9
    double p_negative = 1.0;
};
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

using Statistic = std::function<double(std::span<const double>)>;

struct Interval {
    double estimate = 0.0;
    double se = 0.0;
    double lo = 0.0, hi = 0.0;  // 95% percentile interval (bootstrap) or +/- 1.96 se (jackknife)
};
// nonparametric bootstrap with `resamples` resamples, deterministic given seed
Interval bootstrap(std::span<const double> x, const Statistic& stat, int resamples, std::uint64_t seed);
Interval jackknife(std::span<const double> x, const Statistic& stat);

}  // namespace sinebeta::stats
