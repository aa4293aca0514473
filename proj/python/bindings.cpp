#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pinncert/certify.hpp"
#include "pinncert/cli.hpp"
#include "pinncert/errors.hpp"

namespace py = pybind11;
using namespace pinncert;

PYBIND11_MODULE(_pinncert, m) {
    m.doc() = "Train and certify neural trial solutions of -eps y'' + b y' + c y = f";

    py::register_exception<Error>(m, "PinncertError");

    py::class_<Problem>(m, "Problem")
        .def_readonly("name", &Problem::name)
        .def_readonly("x1", &Problem::x1)
        .def_readonly("x2", &Problem::x2)
        .def_readonly("eps", &Problem::eps)
        .def_readonly("p", &Problem::p)
        .def_readonly("q", &Problem::q)
        .def_readonly("params", &Problem::params)
        .def("length", &Problem::length)
        .def("b", [](const Problem& p, double x) { return p.b.eval(x); })
        .def("c", [](const Problem& p, double x) { return p.c.eval(x); })
        .def("f", [](const Problem& p, double x) { return p.f.eval(x); })
        .def("has_exact", [](const Problem& p) { return p.exact.has_value(); })
        .def("exact",
             [](const Problem& p, double x) {
                 if (!p.exact) throw ProblemError("problem '" + p.name + "' has no closed form");
                 return p.exact->eval(x);
             })
        .def("with_param", &with_param)
        .def("__repr__", [](const Problem& p) {
            std::ostringstream os;
            os << "<Problem " << p.name << " on (" << p.x1 << ", " << p.x2 << ")>";
            return os.str();
        });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("min_c", &ValidationReport::min_c)
        .def_readonly("gamma", &ValidationReport::gamma)
        .def_readonly("lambda_min_c", &ValidationReport::lambda_min_c)
        .def_readonly("energy_ok", &ValidationReport::energy_ok)
        .def_readonly("weighted_ok", &ValidationReport::weighted_ok)
        .def_readonly("plain_ok", &ValidationReport::plain_ok);

    m.def("registry_names", &registry_names);
    m.def("registry_get", &registry_get, py::arg("name"), py::arg("params") = Bindings{});
    m.def("validate", &validate);

    py::enum_<Family>(m, "Family")
        .value("ENERGY", Family::kEnergy)
        .value("WEIGHTED", Family::kWeighted)
        .value("PLAIN", Family::kPlain);

    py::class_<Certificate>(m, "Certificate")
        .def_readonly("family", &Certificate::family)
        .def_readonly("rho_min", &Certificate::rho_min)
        .def_readonly("rho_max", &Certificate::rho_max)
        .def_readonly("ratio_bound", &Certificate::ratio_bound)
        .def_readonly("K1", &Certificate::K1)
        .def_readonly("K2", &Certificate::K2)
        .def_readonly("pinn1_factor", &Certificate::pinn1_factor)
        .def_readonly("lambda_", &Certificate::lambda)
        .def_readonly("ratio_bound_loose", &Certificate::ratio_bound_loose)
        .def_readonly("K3", &Certificate::K3)
        .def_readonly("K3_tilde", &Certificate::K3_tilde)
        .def_readonly("gamma", &Certificate::gamma)
        .def_readonly("K4_tilde", &Certificate::K4_tilde);

    m.def("constants", py::overload_cast<const Problem&, Family>(&constants));
    m.def("constants", py::overload_cast<const Problem&>(&constants));

    py::class_<Network>(m, "Network")
        .def_static("init", &Network::init, py::arg("seed"), py::arg("hidden_layers") = 2,
                    py::arg("width") = 32)
        .def_static("load", &Network::load)
        .def("save", &Network::save)
        .def("param_count", &Network::param_count)
        .def("forward", &Network::forward)
        .def("forward_jet", [](const Network& net, double x) {
            Jet2 j = net.forward_jet(x);
            return py::make_tuple(j.v, j.d1, j.d2);
        });

    py::class_<TrialFunction, std::shared_ptr<TrialFunction>>(m, "Trial")
        .def("boundary_exact", &TrialFunction::boundary_exact)
        .def("__call__", &TrialFunction::eval)
        .def("eval_jet", [](const TrialFunction& t, double x) {
            Jet2 j = t.eval_jet(x);
            return py::make_tuple(j.v, j.d1, j.d2);
        });

    m.def(
        "make_trial",
        [](const std::string& kind, const Network& net,
           const Problem& prob) -> std::shared_ptr<TrialFunction> {
            if (kind == "pinn1") return std::make_shared<Pinn1Trial>(net);
            if (kind == "pinn2") return std::make_shared<Pinn2Trial>(net, prob);
            throw ConfigError("make_trial: kind must be pinn1 or pinn2, got '" + kind + "'");
        },
        py::arg("kind"), py::arg("net"), py::arg("problem"));

    py::class_<SampleSet>(m, "SampleSet")
        .def_static("draw", &SampleSet::draw, py::arg("seed"), py::arg("n"), py::arg("x1"),
                    py::arg("x2"))
        .def_readonly("seed", &SampleSet::seed)
        .def_readonly("points", &SampleSet::points)
        .def("n", &SampleSet::n);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("initial_loss", &TrainResult::initial_loss)
        .def_readonly("loss_history", &TrainResult::loss_history)
        .def_readonly("error_history", &TrainResult::error_history)
        .def_readonly("sample", &TrainResult::sample);

    m.def(
        "train",
        [](const Problem& prob, TrialFunction& t, int epochs, int n, std::uint64_t seed,
           double lr, bool resample) {
            LossSpec spec;
            spec.n = n;
            spec.resample = resample;
            TrainConfig cfg;
            cfg.epochs = epochs;
            cfg.seed = seed;
            cfg.lr = lr;
            return train(prob, t, spec, cfg);
        },
        py::arg("problem"), py::arg("trial"), py::arg("epochs") = 500, py::arg("n") = 256,
        py::arg("seed") = 0, py::arg("lr") = 1e-3, py::arg("resample") = false);

    py::class_<Report>(m, "Report")
        .def_readonly("error_sampled", &Report::error_sampled)
        .def_readonly("loss_sampled", &Report::loss_sampled)
        .def_readonly("boundary_loss", &Report::boundary_loss)
        .def_readonly("error_integral", &Report::error_integral)
        .def_readonly("residual_integral", &Report::residual_integral)
        .def_readonly("loss_integral", &Report::loss_integral)
        .def_readonly("ratio", &Report::ratio)
        .def_readonly("ratio_sampled", &Report::ratio_sampled)
        .def_readonly("bound_plain", &Report::bound_plain)
        .def_readonly("bound_weighted_tight", &Report::bound_weighted_tight)
        .def_readonly("bound_weighted_loose", &Report::bound_weighted_loose)
        .def_readonly("bound_energy", &Report::bound_energy)
        .def_readonly("plain_applicable", &Report::plain_applicable)
        .def_readonly("weighted_applicable", &Report::weighted_applicable)
        .def_readonly("energy_applicable", &Report::energy_applicable)
        .def_readonly("plain_pass", &Report::plain_pass)
        .def_readonly("weighted_pass", &Report::weighted_pass)
        .def_readonly("energy_pass", &Report::energy_pass)
        .def_readonly("gamma", &Report::gamma)
        .def_readonly("lambda_min_c", &Report::lambda_min_c)
        .def_readonly("error_halfwidth_k5", &Report::error_halfwidth_k5)
        .def_readonly("loss_halfwidth_k5", &Report::loss_halfwidth_k5)
        .def_readonly("reference_error", &Report::reference_error)
        .def_readonly("seed", &Report::seed)
        .def_readonly("n", &Report::n)
        .def("all_pass", &Report::all_pass);

    m.def(
        "certified_report",
        [](const Problem& prob, const TrialFunction& t, const SampleSet& s) {
            return certified_report(prob, t, s);
        },
        py::arg("problem"), py::arg("trial"), py::arg("sample"));

    m.def(
        "run_cli", [](const std::vector<std::string>& args) { return cli::run(args); },
        "In-process CLI entry point; returns the exit code.");
}
