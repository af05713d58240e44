#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "sinebeta/errors.hpp"
#include "sinebeta/gibbs.hpp"
#include "sinebeta/harness.hpp"
#include "sinebeta/perturb.hpp"
#include "sinebeta/pointproc.hpp"
#include "sinebeta/sampler.hpp"
#include "sinebeta/transport.hpp"

namespace py = pybind11;
using namespace sinebeta;

namespace {

// JSON values cross the boundary as text and are parsed on the Python side.
std::string dump(const nlohmann::json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_sinebeta, m) {
    m.doc() = "Sine-beta CLT numerical lab";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<NonFinite>(m, "NonFinite", base.ptr());
    py::register_exception<OutOfWindow>(m, "OutOfWindow", base.ptr());
    py::register_exception<EndpointSingularity>(m, "EndpointSingularity", base.ptr());
    py::register_exception<ScaleSeparationViolated>(m, "ScaleSeparationViolated", base.ptr());
    py::register_exception<CoincidentPoints>(m, "CoincidentPoints", base.ptr());
    py::register_exception<InsufficientBulk>(m, "InsufficientBulk", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

    py::class_<TestFunction>(m, "TestFunction")
        .def("eval", &TestFunction::eval, py::arg("k"), py::arg("x"))
        .def("__call__", &TestFunction::operator())
        .def_property_readonly("support_radius", &TestFunction::support_radius)
        .def_property_readonly("name", &TestFunction::name);
    m.def("builtin_test_function", &builtin_test_function, py::arg("name"), py::arg("amplitude") = 1.0);

    py::class_<RescaledTestFunction>(m, "RescaledTestFunction")
        .def(py::init<TestFunction, double, double>(), py::arg("base"), py::arg("ell"), py::arg("center") = 0.0)
        .def("eval", &RescaledTestFunction::eval, py::arg("k"), py::arg("x"))
        .def("__call__", &RescaledTestFunction::operator())
        .def("integral", &RescaledTestFunction::integral)
        .def_property_readonly("ell", &RescaledTestFunction::ell)
        .def_property_readonly("center", &RescaledTestFunction::center);
    m.def("h_half_norm_sq", py::overload_cast<const TestFunction&>(&h_half_norm_sq));

    py::class_<PointConfiguration>(m, "PointConfiguration")
        .def(py::init<std::vector<double>, double, double>(), py::arg("points"), py::arg("window_lo"),
             py::arg("window_hi"))
        .def_property_readonly("points", &PointConfiguration::points)
        .def_property_readonly("window", [](const PointConfiguration& c) {
            return py::make_tuple(c.window_lo(), c.window_hi());
        })
        .def("count", &PointConfiguration::count)
        .def("__len__", &PointConfiguration::size);
    m.def("fluct", py::overload_cast<const RescaledTestFunction&, const PointConfiguration&>(&fluct));
    m.def("discrepancy", &discrepancy);

    py::enum_<ScaleMode>(m, "ScaleMode").value("strict", ScaleMode::strict).value("relaxed", ScaleMode::relaxed);

    py::class_<PerturbationBundle, std::shared_ptr<PerturbationBundle>>(m, "PerturbationBundle")
        .def(py::init([](double lambda, const RescaledTestFunction& phi, ScaleMode mode) {
                 return std::make_shared<PerturbationBundle>(lambda, phi, mode);
             }),
             py::arg("lambda_"), py::arg("phi"), py::arg("mode") = ScaleMode::strict)
        .def("h", &PerturbationBundle::h, py::arg("x"), py::arg("k") = 0)
        .def("m", &PerturbationBundle::m, py::arg("x"), py::arg("k") = 0)
        .def("m_tilde", &PerturbationBundle::m_tilde, py::arg("x"), py::arg("k") = 0)
        .def("lp", &PerturbationBundle::lp)
        .def("total_mass_m", &PerturbationBundle::total_mass_m)
        .def("total_mass_m_tilde", &PerturbationBundle::total_mass_m_tilde)
        .def_property_readonly("junctions", &PerturbationBundle::junctions)
        .def_property_readonly("lambda_", &PerturbationBundle::lambda)
        .def_property_readonly("ell", &PerturbationBundle::ell);
    m.def("variance_term", [](const PerturbationBundle& b) {
        const auto v = variance_term(b);
        return py::dict(py::arg("v") = v.v, py::arg("target") = v.target, py::arg("errvar") = v.errvar);
    });
    m.def("s_max", &s_max);

    py::class_<TransportBundle>(m, "TransportBundle")
        .def(py::init([](std::shared_ptr<PerturbationBundle> b, double s) {
                 return TransportBundle(std::const_pointer_cast<const PerturbationBundle>(b), s);
             }),
             py::arg("bundle"), py::arg("s"))
        .def("map", &TransportBundle::map)
        .def("psi", &TransportBundle::psi)
        .def("mu", &TransportBundle::mu)
        .def_property_readonly("s", &TransportBundle::s);
    m.def("verify_energy_splitting_json",
          [](const TransportBundle& T, const PointConfiguration& eta) { return dump(to_json(verify_energy_splitting(T, eta))); });
    m.def("verify_energy_expansion_json",
          [](const TransportBundle& T, const PointConfiguration& eta) { return dump(to_json(verify_energy_expansion(T, eta))); });

    m.def("sample_tridiagonal_eigs", &sample_tridiagonal_eigs, py::arg("n"), py::arg("beta"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sample_bulk",
          [](std::size_t n, double beta, std::uint64_t seed, std::uint64_t replica, double wf, double density) {
              return sample_bulk(n, beta, seed, replica, wf, density).config;
          },
          py::arg("n"), py::arg("beta"), py::arg("seed"), py::arg("replica"), py::arg("window_fraction"),
          py::arg("density"), py::call_guard<py::gil_scoped_release>());
    m.def("semicircle_density_at_zero", &semicircle_density_at_zero);

    m.def("interior_energy", &interior_energy, py::arg("eta"), py::arg("lambda_"));
    m.def("gibbs_sample",
          [](double beta, double lambda, const PointConfiguration& gamma, std::uint64_t steps, std::uint64_t seed,
             std::uint64_t thin) {
              GibbsSpec spec;
              spec.beta = beta;
              spec.lambda = lambda;
              spec.gamma = gamma;
              return gibbs_mcmc(spec, steps, seed, thin).samples;
          },
          py::arg("beta"), py::arg("lambda_"), py::arg("gamma"), py::arg("steps"), py::arg("seed"),
          py::arg("thin") = 1, py::call_guard<py::gil_scoped_release>());

    m.def("run_clt_experiment_json",
          [](const std::string& config) {
              const auto cfg = config_from_json(nlohmann::json::parse(config));
              CLTReport r;
              {
                  py::gil_scoped_release release;
                  r = run_clt_experiment(cfg);
              }
              return dump(to_json(r));
          },
          py::arg("config"));
}
