#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "sinebeta/errors.hpp"
#include "sinebeta/gibbs.hpp"
#include "sinebeta/harness.hpp"
#include "sinebeta/io.hpp"
#include "sinebeta/perturb.hpp"
#include "sinebeta/sampler.hpp"
#include "sinebeta/singular.hpp"
#include "sinebeta/transport.hpp"

using namespace sinebeta;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct BundleArgs {
    double lambda = 400.0;
    double ell = 20.0;
    std::string function = "bump";
    double amplitude = 1.0;
    double center = 0.0;
    bool relaxed = false;

    void add(CLI::App* app) {
        app->add_option("--lambda", lambda, "half-width of Lambda")->capture_default_str();
        app->add_option("--ell", ell, "scale of the test function")->capture_default_str();
        app->add_option("--function", function, "bump, flat_bump, odd_bump or zero")->capture_default_str();
        app->add_option("--amplitude", amplitude)->capture_default_str();
        app->add_option("--center", center)->capture_default_str();
        app->add_flag("--relaxed", relaxed, "allow ell and lambda outside 100 < ell < lambda/1000");
    }
    RescaledTestFunction phi() const {
        return RescaledTestFunction(builtin_test_function(function, amplitude), ell, center);
    }
    ScaleMode mode() const { return relaxed ? ScaleMode::relaxed : ScaleMode::strict; }
    json header() const {
        return {{"lambda", lambda}, {"ell", ell},          {"function", function},
                {"amplitude", amplitude}, {"center", center}, {"relaxed", relaxed}};
    }
};

std::ofstream open_out(const std::string& path) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write " + path);
    f.precision(17);
    return f;
}

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * (i + 0.5) / n);
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sine-beta CLT laboratory"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a CLT experiment from a JSON config");
    std::string config_path, out_dir = "clt_out";
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory")->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "summarize a report directory");
    std::string in_dir;
    report->add_option("--in", in_dir, "directory written by run")->required();

    // hilbert-tab
    auto* htab = app.add_subcommand("hilbert-tab", "tabulate the finite Hilbert transform h and derivatives");
    BundleArgs hargs;
    hargs.add(htab);
    int hpoints = 201;
    std::string hout;
    htab->add_option("--points", hpoints)->capture_default_str();
    htab->add_option("--out", hout, "CSV file (stdout if omitted)");

    // perturb-dump
    auto* pdump = app.add_subcommand("perturb-dump", "dump x, m, m_tilde, LP, ErrorLog as CSV");
    BundleArgs pargs;
    pargs.add(pdump);
    int ppoints = 801;
    std::string pout;
    pdump->add_option("--points", ppoints)->capture_default_str();
    pdump->add_option("--out", pout, "CSV file (stdout if omitted)");

    // transport-verify
    auto* tv = app.add_subcommand("transport-verify", "energy identities along the transport, as JSON");
    BundleArgs targs;
    targs.add(tv);
    double ts = -1.0;
    int tpoints = 20;
    std::uint64_t tseed = 1;
    std::string tconfig, tout;
    tv->add_option("--s", ts, "perturbation strength (default s_max / 2)");
    tv->add_option("--points", tpoints, "number of uniform random points in Lambda")->capture_default_str();
    tv->add_option("--seed", tseed)->capture_default_str();
    tv->add_option("--configuration", tconfig, "points file used instead of random points");
    tv->add_option("--out", tout, "JSON file (stdout if omitted)");

    // gibbs-sample
    auto* gs = app.add_subcommand("gibbs-sample", "Metropolis sampling of the conditional law in Lambda");
    double gbeta = 2.0, glambda = 5.0, gp = 0.0;
    std::uint64_t gsteps = 100000, gseed = 1, gthin = 1000;
    std::string gext, gout = "gibbs_out";
    gs->add_option("--beta", gbeta)->capture_default_str();
    gs->add_option("--lambda", glambda)->capture_default_str();
    gs->add_option("--steps", gsteps)->capture_default_str();
    gs->add_option("--seed", gseed)->capture_default_str();
    gs->add_option("--thin", gthin)->capture_default_str();
    gs->add_option("--truncation", gp, "exterior truncation p (default: window of the exterior file)");
    gs->add_option("--exterior", gext, "configuration file giving gamma")->required()->check(CLI::ExistingFile);
    gs->add_option("--out", gout)->capture_default_str();

    // sample
    auto* sm = app.add_subcommand("sample", "bulk-rescaled tridiagonal samples");
    std::size_t sn = 4096, sreps = 10, spilot = 1000;
    double sbeta = 2.0, swf = 0.02;
    std::uint64_t sseed = 1;
    std::string sout = "samples";
    sm->add_option("--n", sn)->capture_default_str();
    sm->add_option("--beta", sbeta)->capture_default_str();
    sm->add_option("--seed", sseed)->capture_default_str();
    sm->add_option("--replicas", sreps)->capture_default_str();
    sm->add_option("--window-fraction", swf)->capture_default_str();
    sm->add_option("--pilot-replicas", spilot)->capture_default_str();
    sm->add_option("--out", sout)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            std::ifstream f(config_path);
            const auto cfg = config_from_json(json::parse(f));
            const auto r = run_clt_experiment(cfg);
            write_report(r, out_dir);
            std::cout << summarize_report(to_json(r));
            std::cout << "report written to " << out_dir << "\n";
        } else if (*report) {
            std::ifstream f(fs::path(in_dir) / "report.json");
            if (!f) throw InvalidArgument("no report.json in " + in_dir);
            std::cout << summarize_report(json::parse(f));
        } else if (*htab) {
            HilbertEvaluator h(hargs.lambda, hargs.phi(), hargs.mode());
            std::ofstream file;
            if (!hout.empty()) file = open_out(hout);
            std::ostream& o = hout.empty() ? std::cout : file;
            o.precision(17);
            o << "# " << hargs.header().dump() << "\n";
            o << "x,k,value\n";
            for (double x : grid(-hargs.lambda, hargs.lambda, hpoints))
                for (int k = 0; k <= 2; ++k) o << x << "," << k << "," << h(x, k) << "\n";
        } else if (*pdump) {
            PerturbationBundle b(pargs.lambda, pargs.phi(), pargs.mode());
            std::ofstream file;
            if (!pout.empty()) file = open_out(pout);
            std::ostream& o = pout.empty() ? std::cout : file;
            o.precision(17);
            auto hdr = pargs.header();
            hdr["total_mass_m"] = b.total_mass_m();
            hdr["l1_m_tilde"] = b.l1_norm_m_tilde();
            hdr["sup_m_tilde"] = b.sup_norm_m_tilde();
            o << "# " << hdr.dump() << "\n";
            o << "x,m,m_tilde,LP,ErrorLog\n";
            for (double x : grid(-pargs.lambda, pargs.lambda, ppoints))
                o << x << "," << b.m(x) << "," << b.m_tilde(x) << "," << b.lp(x) << ","
                  << b.error_log(x, Side::left) + b.error_log(x, Side::right) << "\n";
        } else if (*tv) {
            auto b = std::make_shared<PerturbationBundle>(targs.lambda, targs.phi(), targs.mode());
            const double s = ts >= 0.0 ? ts : s_max(*b) / 2;
            TransportBundle T(b, s);
            PointConfiguration eta;
            if (!tconfig.empty()) {
                eta = io::load_text(tconfig);
            } else {
                auto rng = replica_rng(tseed, 0);
                std::vector<double> p;
                for (int i = 0; i < tpoints; ++i)
                    p.push_back(-targs.lambda + 2 * targs.lambda * (static_cast<double>(rng() >> 11) * 0x1.0p-53));
                eta = PointConfiguration(p, -targs.lambda, targs.lambda);
            }
            json j;
            j["bundle"] = targs.header();
            j["s"] = s;
            j["s_max"] = T.s_max();
            j["points"] = eta.size();
            j["splitting"] = to_json(verify_energy_splitting(T, eta));
            j["expansion"] = to_json(verify_energy_expansion(T, eta));
            json df = json::array();
            for (double x : {1.5 * targs.lambda, 2 * targs.lambda}) {
                const auto d = difference_field(T, eta, x);
                df.push_back({{"x", x},
                              {"df", d.df},
                              {"lp_part", d.lp_part},
                              {"errorlog_part", d.errorlog_part},
                              {"errordf", d.errordf},
                              {"residual", d.residual},
                              {"tolerance", 1e-7}});
            }
            j["difference_field"] = df;
            const auto pb = psi_bounds_check(T, 401);
            j["psi_bounds"] = {{"sup_psi", pb.sup_psi},
                               {"rough_bound_ok", pb.rough_bound_ok},
                               {"l1_ratio", pb.l1_ratio},
                               {"regime_ratio", pb.regime_ratio},
                               {"jacobian_residual", pb.jacobian_residual},
                               {"identity_on_strips", pb.identity_on_strips},
                               {"monotone", pb.monotone}};
            if (tout.empty())
                std::cout << j.dump(2) << "\n";
            else
                open_out(tout) << j.dump(2) << "\n";
        } else if (*gs) {
            GibbsSpec spec;
            spec.beta = gbeta;
            spec.lambda = glambda;
            spec.gamma = io::load_text(gext);
            spec.p = gp;
            const auto r = gibbs_mcmc(spec, gsteps, gseed, gthin);
            fs::create_directories(gout);
            for (std::size_t i = 0; i < r.samples.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "sample_%06zu.txt", i);
                io::save_text((fs::path(gout) / name).string(), r.samples[i]);
            }
            json meta = {{"beta", gbeta},         {"lambda", glambda},     {"steps", gsteps},
                         {"seed", gseed},         {"thin", gthin},         {"truncation", spec.truncation()},
                         {"samples", r.samples.size()}, {"acceptance_rate", r.acceptance_rate},
                         {"energy_drift", r.energy_drift}};
            open_out((fs::path(gout) / "meta.json").string()) << meta.dump(2) << "\n";
            std::cout << meta.dump(2) << "\n";
        } else if (*sm) {
            const auto cal = calibrate_bulk_density(sn, sbeta, sseed, spilot);
            fs::create_directories(sout);
            for (std::size_t r = 0; r < sreps; ++r) {
                const auto b = sample_bulk(sn, sbeta, sseed, r, swf, cal.density);
                char name[32];
                std::snprintf(name, sizeof name, "config_%06zu", r);
                io::save_text((fs::path(sout) / (std::string(name) + ".txt")).string(), b.config);
                json meta = {{"n_source", b.n_source},   {"beta", b.beta},
                             {"seed", b.seed},           {"replica", b.replica},
                             {"window_fraction", b.window_fraction}, {"density", b.density},
                             {"density_se", cal.density_error},      {"semicircle_density", cal.semicircle},
                             {"points", b.config.size()}};
                open_out((fs::path(sout) / (std::string(name) + ".json")).string()) << meta.dump(2) << "\n";
            }
            std::cout << "wrote " << sreps << " configurations to " << sout << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
