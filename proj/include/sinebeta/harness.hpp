#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sinebeta/pointproc.hpp"

namespace sinebeta {

struct ExperimentConfig {
    double beta = 2.0;
    double ell = 10.0;
    std::size_t n = 4096;
    std::size_t replicas = 2000;
    std::uint64_t seed = 1;
    double window_fraction = 0.02;
    std::string test_function = "bump";
    double amplitude = 1.0;
    std::vector<double> mgf_t = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> r_grid = {4.0, 8.0, 16.0, 32.0};
    std::size_t pilot_replicas = 1000;
    int bootstrap_resamples = 1000;
    std::optional<double> lambda;  // transport diagnostics
    std::optional<double> s;       // defaults to s_max / 2 when lambda is set

    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

struct MGFCurve {
    std::vector<double> t, log_mgf, se;
    std::vector<double> band_lo, band_hi;  // estimate -/+ 3 bootstrap standard errors
    std::vector<double> pct_lo, pct_hi;    // 95% bootstrap percentile interval
    std::vector<double> target;            // empty unless supplied
};
// log of the mean of exp(t X) per t with bootstrap bands
MGFCurve empirical_mgf(const std::vector<double>& values, const std::vector<double>& t_grid,
                       int resamples = 1000, std::uint64_t seed = 1, const std::vector<double>& target = {});

struct DiscrepancyRow {
    double R = 0.0;
    double mean = 0.0;
    double variance = 0.0, variance_se = 0.0;
    double var_over_r = 0.0, var_over_r_se = 0.0;
};
// Var(Discr_[-R, R]) over configurations, jackknife errors
std::vector<DiscrepancyRow> discrepancy_scan(const std::vector<PointConfiguration>& configs,
                                             const std::vector<double>& r_grid);
std::vector<DiscrepancyRow> discrepancy_scan(const std::vector<std::vector<double>>& counts,
                                             const std::vector<double>& r_grid);

struct CLTReport {
    ExperimentConfig config;
    double norm_sq = 0.0;  // |phi_bar|^2 in H^{1/2}
    double target_variance = 0.0;
    double mean = 0.0, mean_se = 0.0, mean_lo = 0.0, mean_hi = 0.0;
    double variance = 0.0, variance_se = 0.0, variance_lo = 0.0, variance_hi = 0.0;
    double variance_rel_error = 0.0;
    std::optional<double> ks_statistic, ks_p_value;
    MGFCurve mgf;
    std::vector<DiscrepancyRow> discrepancy;
    double spearman_rho = 0.0, spearman_p = 1.0;
    double density = 0.0, density_se = 0.0, semicircle_density = 0.0;
    double window_half_width = 0.0;
    double mean_points = 0.0;
    std::vector<double> fluctuations;
    nlohmann::json transport;  // null unless lambda is set
    double runtime_seconds = 0.0;
    int threads = 1;
};

// thread count from SINEBETA_THREADS, else the hardware concurrency
int worker_threads();

CLTReport run_clt_experiment(const ExperimentConfig& cfg);

// Everything except the "runtime" object is a deterministic function of the config.
nlohmann::json to_json(const CLTReport& r);
// report.json, fluctuations.csv, mgf.csv, discrepancy.csv
void write_report(const CLTReport& r, const std::string& dir);
std::string summarize_report(const nlohmann::json& report);

// Interior statistic of bulk samples against the same statistic after Gibbs resampling of
// [-lambda, lambda] given the sampled exterior. A diagnostic only.
struct DLRDiagnostic {
    double direct_mean = 0.0, direct_se = 0.0;
    double gibbs_mean = 0.0, gibbs_se = 0.0;
    double z = 0.0;
    double acceptance_rate = 0.0;
};
DLRDiagnostic dlr_diagnostic(double beta, std::size_t n, double lambda, std::size_t replicas,
                             std::size_t sweeps, std::uint64_t seed, double window_fraction = 0.02);

}  // namespace sinebeta
