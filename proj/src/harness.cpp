#include "sinebeta/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sinebeta/errors.hpp"
#include "sinebeta/gibbs.hpp"
#include "sinebeta/quadrature.hpp"
#include "sinebeta/sampler.hpp"
#include "sinebeta/singular.hpp"
#include "sinebeta/stats.hpp"
#include "sinebeta/testfn.hpp"
#include "sinebeta/transport.hpp"

namespace sinebeta {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (!(beta > 0.0)) throw InvalidArgument("config: beta must be positive");
    if (!(ell > 0.0)) throw InvalidArgument("config: ell must be positive");
    if (n < 2) throw InvalidArgument("config: n must be at least 2");
    if (replicas < 2) throw InvalidArgument("config: replicas must be at least 2");
    if (!(window_fraction > 0.0 && window_fraction < 1.0))
        throw InvalidArgument("config: window_fraction must lie in (0, 1)");
    if (pilot_replicas < 2) throw InvalidArgument("config: pilot_replicas must be at least 2");
    if (bootstrap_resamples < 2) throw InvalidArgument("config: bootstrap_resamples must be at least 2");
    const auto f = builtin_test_function(test_function, amplitude);
    const double h = window_fraction * rescaled_support_half_width(n);
    const double need = ell * f.support_radius() + 2 * ell;
    if (h < need)
        throw InsufficientBulk("config: bulk window half-width " + quad::fmt_g(h) +
                               " cannot hold the test function support with margin 2 ell (need " +
                               quad::fmt_g(need) + ")");
    for (double R : r_grid)
        if (!(R > 0.0 && R <= h)) throw InvalidArgument("config: R-grid values must lie in (0, window half-width]");
    if (s && !lambda) throw InvalidArgument("config: s requires lambda");
    if (lambda) check_scale_separation(*lambda, ell, ScaleMode::strict);
}

ExperimentConfig config_from_json(const json& j) {
    static const std::vector<std::string> known = {
        "beta", "ell", "n", "replicas", "seed", "window_fraction", "test_function", "amplitude", "mgf_t",
        "r_grid", "pilot_replicas", "bootstrap_resamples", "lambda", "s"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw InvalidArgument("config: unknown key '" + k + "'");
    ExperimentConfig c;
    c.beta = j.value("beta", c.beta);
    c.ell = j.value("ell", c.ell);
    c.n = j.value("n", c.n);
    c.replicas = j.value("replicas", c.replicas);
    c.seed = j.value("seed", c.seed);
    c.window_fraction = j.value("window_fraction", c.window_fraction);
    c.test_function = j.value("test_function", c.test_function);
    c.amplitude = j.value("amplitude", c.amplitude);
    c.mgf_t = j.value("mgf_t", c.mgf_t);
    c.r_grid = j.value("r_grid", c.r_grid);
    c.pilot_replicas = j.value("pilot_replicas", c.pilot_replicas);
    c.bootstrap_resamples = j.value("bootstrap_resamples", c.bootstrap_resamples);
    if (j.contains("lambda") && !j["lambda"].is_null()) c.lambda = j["lambda"].get<double>();
    if (j.contains("s") && !j["s"].is_null()) c.s = j["s"].get<double>();
    c.validate();
    return c;
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["beta"] = c.beta;
    j["ell"] = c.ell;
    j["n"] = c.n;
    j["replicas"] = c.replicas;
    j["seed"] = c.seed;
    j["window_fraction"] = c.window_fraction;
    j["test_function"] = c.test_function;
    j["amplitude"] = c.amplitude;
    j["mgf_t"] = c.mgf_t;
    j["r_grid"] = c.r_grid;
    j["pilot_replicas"] = c.pilot_replicas;
    j["bootstrap_resamples"] = c.bootstrap_resamples;
    j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
    j["s"] = c.s ? json(*c.s) : json(nullptr);
    return j;
}

MGFCurve empirical_mgf(const std::vector<double>& values, const std::vector<double>& t_grid, int resamples,
                       std::uint64_t seed, const std::vector<double>& target) {
    if (values.empty()) throw InvalidArgument("empirical_mgf: no values");
    if (!target.empty() && target.size() != t_grid.size())
        throw InvalidArgument("empirical_mgf: target must match the t-grid");
    MGFCurve c;
    c.target = target;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        c.t.push_back(t);
        if (t == 0.0) {
            for (auto* v : {&c.log_mgf, &c.se, &c.band_lo, &c.band_hi, &c.pct_lo, &c.pct_hi}) v->push_back(0.0);
            continue;
        }
        const stats::Statistic lmgf = [t](std::span<const double> x) {
            double m = -INFINITY;
            for (double v : x) m = std::max(m, t * v);
            double s = 0.0;
            for (double v : x) s += std::exp(t * v - m);
            return m + std::log(s / static_cast<double>(x.size()));
        };
        const auto b = stats::bootstrap(values, lmgf, resamples, seed + 7919 * i);
        c.log_mgf.push_back(b.estimate);
        c.se.push_back(b.se);
        c.band_lo.push_back(b.estimate - 3 * b.se);
        c.band_hi.push_back(b.estimate + 3 * b.se);
        c.pct_lo.push_back(b.lo);
        c.pct_hi.push_back(b.hi);
    }
    return c;
}

std::vector<DiscrepancyRow> discrepancy_scan(const std::vector<std::vector<double>>& counts,
                                             const std::vector<double>& r_grid) {
    std::vector<DiscrepancyRow> rows;
    for (std::size_t k = 0; k < r_grid.size(); ++k) {
        std::vector<double> d;
        d.reserve(counts.size());
        for (const auto& c : counts) d.push_back(c.at(k));
        DiscrepancyRow row;
        row.R = r_grid[k];
        row.mean = stats::mean(d);
        const auto var = [](std::span<const double> x) { return stats::variance(x); };
        const auto jk = stats::jackknife(d, var);
        row.variance = jk.estimate;
        row.variance_se = jk.se;
        row.var_over_r = jk.estimate / row.R;
        row.var_over_r_se = jk.se / row.R;
        rows.push_back(row);
    }
    return rows;
}

std::vector<DiscrepancyRow> discrepancy_scan(const std::vector<PointConfiguration>& configs,
                                             const std::vector<double>& r_grid) {
    std::vector<std::vector<double>> d;
    for (const auto& c : configs) {
        std::vector<double> row;
        for (double R : r_grid) row.push_back(discrepancy(c, -R, R));
        d.push_back(std::move(row));
    }
    return discrepancy_scan(d, r_grid);
}

int worker_threads() {
    if (const char* e = std::getenv("SINEBETA_THREADS")) {
        const int v = std::atoi(e);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// runs body(i) for i in [0, count) on worker threads; results must be stored by index
template <class F>
void parallel_for(std::size_t count, int threads, F body) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

json transport_diagnostics(const ExperimentConfig& cfg) {
    const auto f = builtin_test_function(cfg.test_function, cfg.amplitude);
    auto bundle = std::make_shared<PerturbationBundle>(*cfg.lambda, RescaledTestFunction(f, cfg.ell));
    const double sm = s_max(*bundle);
    const double s = cfg.s.value_or(sm / 2);
    TransportBundle T(bundle, s);
    const auto pb = psi_bounds_check(T, 401);
    const auto pf = push_forward_check(T, RescaledTestFunction(f, cfg.ell));
    json j;
    j["lambda"] = *cfg.lambda;
    j["s_max"] = sm;
    j["s"] = s;
    j["sup_psi"] = pb.sup_psi;
    j["rough_bound_ok"] = pb.rough_bound_ok;
    j["regime_ratio"] = pb.regime_ratio;
    j["jacobian_residual"] = pb.jacobian_residual;
    j["push_forward_relative"] = pf.relative;
    return j;
}

json rows_json(const std::vector<DiscrepancyRow>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"R", r.R},
                     {"mean", r.mean},
                     {"variance", r.variance},
                     {"variance_se", r.variance_se},
                     {"var_over_R", r.var_over_r},
                     {"var_over_R_se", r.var_over_r_se}});
    return a;
}

}  // namespace

CLTReport run_clt_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    CLTReport r;
    r.config = cfg;
    r.threads = worker_threads();
    const auto base = builtin_test_function(cfg.test_function, cfg.amplitude);
    const RescaledTestFunction phi(base, cfg.ell);
    r.norm_sq = base.is_zero() ? 0.0 : h_half_norm_sq(base);
    r.target_variance = 2.0 / cfg.beta * r.norm_sq;

    const auto cal = calibrate_bulk_density(cfg.n, cfg.beta, cfg.seed, cfg.pilot_replicas);
    r.density = cal.density;
    r.density_se = cal.density_error;
    r.semicircle_density = cal.semicircle;
    r.window_half_width = cfg.window_fraction * rescaled_support_half_width(cfg.n);

    const double integral = phi.integral();
    std::vector<double> fl(cfg.replicas), npts(cfg.replicas);
    std::vector<std::vector<double>> discr(cfg.replicas);
    parallel_for(cfg.replicas, r.threads, [&](std::size_t i) {
        const auto b = sample_bulk(cfg.n, cfg.beta, cfg.seed, i, cfg.window_fraction, cal.density);
        fl[i] = fluct(phi, b.config, integral);
        npts[i] = static_cast<double>(b.config.size());
        for (double R : cfg.r_grid) discr[i].push_back(discrepancy(b.config, -R, R));
    });
    r.fluctuations = fl;
    r.mean_points = stats::mean(npts);

    r.mean = stats::mean(fl);
    r.mean_se = std::sqrt(stats::variance(fl) / static_cast<double>(fl.size()));
    r.mean_lo = r.mean - 1.96 * r.mean_se;
    r.mean_hi = r.mean + 1.96 * r.mean_se;
    const auto vb = stats::bootstrap(fl, [](std::span<const double> x) { return stats::variance(x); },
                                     cfg.bootstrap_resamples, cfg.seed ^ 0xB0075742ULL);
    r.variance = vb.estimate;
    r.variance_se = vb.se;
    r.variance_lo = vb.lo;
    r.variance_hi = vb.hi;
    r.variance_rel_error = r.target_variance > 0 ? std::abs(r.variance - r.target_variance) / r.target_variance : 0.0;
    if (r.target_variance > 0) {
        std::vector<double> z(fl);
        const double sd = std::sqrt(r.target_variance);
        for (double& v : z) v /= sd;
        const auto ks = stats::ks_one_sample(z, stats::normal_cdf);
        r.ks_statistic = ks.statistic;
        r.ks_p_value = ks.p_value;
    }
    std::vector<double> target;
    for (double t : cfg.mgf_t) target.push_back(t * t / cfg.beta * r.norm_sq);
    r.mgf = empirical_mgf(fl, cfg.mgf_t, cfg.bootstrap_resamples, cfg.seed ^ 0x3C6EF372ULL, target);
    r.discrepancy = discrepancy_scan(discr, cfg.r_grid);
    if (r.discrepancy.size() >= 3) {
        std::vector<double> R, v;
        for (const auto& row : r.discrepancy) {
            R.push_back(row.R);
            v.push_back(row.var_over_r);
        }
        const auto sp = stats::spearman(R, v);
        r.spearman_rho = sp.rho;
        r.spearman_p = sp.p_negative;
    }
    if (cfg.lambda) r.transport = transport_diagnostics(cfg);
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

json to_json(const CLTReport& r) {
    json j;
    j["config"] = to_json(r.config);
    j["target"] = {{"norm_sq", r.norm_sq}, {"variance", r.target_variance}};
    j["mean"] = {{"value", r.mean}, {"se", r.mean_se}, {"ci95", {r.mean_lo, r.mean_hi}}};
    j["variance"] = {{"value", r.variance},
                     {"se", r.variance_se},
                     {"ci95", {r.variance_lo, r.variance_hi}},
                     {"relative_error", r.variance_rel_error}};
    j["ks"] = {{"statistic", r.ks_statistic ? json(*r.ks_statistic) : json(nullptr)},
               {"p_value", r.ks_p_value ? json(*r.ks_p_value) : json(nullptr)},
               {"reference", "standard normal after dividing by the target standard deviation"}};
    j["mgf"] = {{"t", r.mgf.t},
                {"log_mgf", r.mgf.log_mgf},
                {"se", r.mgf.se},
                {"band_lo", r.mgf.band_lo},
                {"band_hi", r.mgf.band_hi},
                {"pct_lo", r.mgf.pct_lo},
                {"pct_hi", r.mgf.pct_hi},
                {"target", r.mgf.target}};
    j["discrepancy"] = {{"rows", rows_json(r.discrepancy)},
                        {"spearman_rho", r.spearman_rho},
                        {"spearman_p_negative", r.spearman_p}};
    j["bulk"] = {{"density", r.density},
                 {"density_se", r.density_se},
                 {"semicircle_density", r.semicircle_density},
                 {"window_half_width", r.window_half_width},
                 {"mean_points", r.mean_points}};
    j["transport"] = r.transport;
    j["runtime"] = {{"seconds", r.runtime_seconds}, {"threads", r.threads}};
    return j;
}

void write_report(const CLTReport& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(fs::path(dir) / name);
        if (!f) throw InvalidArgument(std::string("cannot write ") + name + " in " + dir);
        f.precision(17);
        return f;
    };
    open("report.json") << to_json(r).dump(2) << "\n";
    {
        auto f = open("fluctuations.csv");
        f << "replica,fluct\n";
        for (std::size_t i = 0; i < r.fluctuations.size(); ++i) f << i << "," << r.fluctuations[i] << "\n";
    }
    {
        auto f = open("mgf.csv");
        f << "t,log_mgf,se,band_lo,band_hi,pct_lo,pct_hi,target\n";
        for (std::size_t i = 0; i < r.mgf.t.size(); ++i)
            f << r.mgf.t[i] << "," << r.mgf.log_mgf[i] << "," << r.mgf.se[i] << "," << r.mgf.band_lo[i] << ","
              << r.mgf.band_hi[i] << "," << r.mgf.pct_lo[i] << "," << r.mgf.pct_hi[i] << ","
              << (i < r.mgf.target.size() ? r.mgf.target[i] : NAN) << "\n";
    }
    {
        auto f = open("discrepancy.csv");
        f << "R,mean,variance,variance_se,var_over_R,var_over_R_se\n";
        for (const auto& row : r.discrepancy)
            f << row.R << "," << row.mean << "," << row.variance << "," << row.variance_se << "," << row.var_over_r
              << "," << row.var_over_r_se << "\n";
    }
}

std::string summarize_report(const json& j) {
    std::ostringstream o;
    o.precision(6);
    const auto& c = j.at("config");
    o << "beta " << c.at("beta") << ", ell " << c.at("ell") << ", n " << c.at("n") << ", replicas "
      << c.at("replicas") << ", seed " << c.at("seed") << "\n";
    o << "mean      " << j["mean"]["value"].get<double>() << " (se " << j["mean"]["se"].get<double>() << ")\n";
    o << "variance  " << j["variance"]["value"].get<double>() << " (se " << j["variance"]["se"].get<double>()
      << "), target " << j["target"]["variance"].get<double>() << ", relative error "
      << j["variance"]["relative_error"].get<double>() << "\n";
    if (!j["ks"]["p_value"].is_null())
        o << "KS        D = " << j["ks"]["statistic"].get<double>() << ", p = " << j["ks"]["p_value"].get<double>()
          << "\n";
    o << "log-MGF   t, estimate, band, target\n";
    const auto& m = j["mgf"];
    for (std::size_t i = 0; i < m["t"].size(); ++i) {
        o << "  " << m["t"][i].get<double>() << "  " << m["log_mgf"][i].get<double>() << "  ["
          << m["band_lo"][i].get<double>() << ", " << m["band_hi"][i].get<double>() << "]";
        if (i < m["target"].size()) o << "  " << m["target"][i].get<double>();
        o << "\n";
    }
    o << "discrepancy R, Var, Var/R\n";
    for (const auto& row : j["discrepancy"]["rows"])
        o << "  " << row["R"].get<double>() << "  " << row["variance"].get<double>() << "  "
          << row["var_over_R"].get<double>() << " (se " << row["var_over_R_se"].get<double>() << ")\n";
    o << "Spearman rho " << j["discrepancy"]["spearman_rho"].get<double>() << ", one-sided p "
      << j["discrepancy"]["spearman_p_negative"].get<double>() << "\n";
    return o.str();
}

DLRDiagnostic dlr_diagnostic(double beta, std::size_t n, double lambda, std::size_t replicas, std::size_t sweeps,
                             std::uint64_t seed, double window_fraction) {
    if (replicas < 2) throw InvalidArgument("dlr_diagnostic: need at least 2 replicas");
    const auto cal = calibrate_bulk_density(n, beta, seed, 200);
    // mean squared gap between consecutive points of the interior
    auto stat = [](const std::vector<double>& p) {
        if (p.size() < 2) return 0.0;
        double s = 0.0;
        for (std::size_t i = 1; i < p.size(); ++i) s += (p[i] - p[i - 1]) * (p[i] - p[i - 1]);
        return s / static_cast<double>(p.size() - 1);
    };
    std::vector<double> direct, resampled;
    double acc = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) {
        const auto b = sample_bulk(n, beta, seed, r, window_fraction, cal.density);
        if (b.config.window_hi() < 2 * lambda)
            throw InsufficientBulk("dlr_diagnostic: bulk window narrower than 2 lambda");
        direct.push_back(stat(b.config.restrict_to(-lambda, lambda).points()));
        GibbsSpec spec;
        spec.beta = beta;
        spec.lambda = lambda;
        spec.gamma = b.config;
        const std::size_t k = spec.interior().size();
        if (k == 0) {
            resampled.push_back(0.0);
            continue;
        }
        const auto run = gibbs_mcmc(spec, sweeps * k, seed ^ (r + 1) * 0x9E3779B97F4A7C15ULL, sweeps * k);
        acc += run.acceptance_rate;
        resampled.push_back(stat(run.samples.back().points()));
    }
    DLRDiagnostic d;
    d.direct_mean = stats::mean(direct);
    d.direct_se = std::sqrt(stats::variance(direct) / static_cast<double>(replicas));
    d.gibbs_mean = stats::mean(resampled);
    d.gibbs_se = std::sqrt(stats::variance(resampled) / static_cast<double>(replicas));
    d.z = (d.gibbs_mean - d.direct_mean) / std::hypot(d.direct_se, d.gibbs_se);
    d.acceptance_rate = acc / static_cast<double>(replicas);
    return d;
}

}  // namespace sinebeta
