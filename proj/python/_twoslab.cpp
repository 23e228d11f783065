#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twoslab/harness.hpp"

namespace py = pybind11;
using namespace twoslab;

namespace {

ExampleResult run_named(const std::string& which, const RunConfig* cfg) {
    if (which == "2d") return run_example2d(cfg ? *cfg : RunConfig::defaults_2d());
    const RunConfig c = cfg ? *cfg : RunConfig::defaults_1d();
    if (which == "1") return run_example1(c);
    if (which == "2") return run_example2(c);
    if (which == "3") return run_example3(c);
    throw ValidationError("example must be 1, 2, 3 or 2d");
}

py::dict summary(const ExampleResult& r) {
    py::dict d;
    d["name"] = r.name;
    d["n_eps"] = r.n_eps;
    d["mode_counts"] = r.mode_counts;
    d["l2_errors"] = r.l2_errors;
    d["metrics"] = r.metrics;
    d["table_csv"] = format_table(r.table);
    d["reconstruction_csv"] = reconstruction_csv(r);
    d["bounds_csv"] = bounds_csv(r.bounds);
    d["bounds_hold"] = r.bounds_hold();
    return d;
}

}  // namespace

PYBIND11_MODULE(_twoslab, m) {
    m.doc() = "Two-slab backward heat conduction by cut-off spectral regularization.";

    // later registrations are tried first, so the base class goes first
    const auto& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", error.ptr());

    py::class_<Material>(m, "Material")
        .def(py::init<>())
        .def_readwrite("K", &Material::K)
        .def_readwrite("kappa", &Material::kappa)
        .def_readwrite("rho_c_override", &Material::rho_c_override)
        .def_property_readonly("rho_c", &Material::rho_c);

    py::class_<SlabSystem>(m, "SlabSystem")
        .def(py::init<>())
        .def_readwrite("a", &SlabSystem::a)
        .def_readwrite("b", &SlabSystem::b)
        .def_readwrite("c", &SlabSystem::c)
        .def_readwrite("t0", &SlabSystem::t0)
        .def_readwrite("tf", &SlabSystem::tf)
        .def_readwrite("mat_b", &SlabSystem::mat_b)
        .def_readwrite("mat_a", &SlabSystem::mat_a);

    m.def("copper_molybdenum", &copper_molybdenum, py::arg("b") = 5.0, py::arg("a") = 3.0,
          py::arg("t0") = 0.0, py::arg("tf") = 0.1);
    m.def("unit_system", &unit_system, py::arg("b"), py::arg("a"), py::arg("t0") = 0.0,
          py::arg("tf") = 0.1);
    m.def("validate_system", &validate_system);

    py::class_<EigenValuePair>(m, "EigenValuePair")
        .def_readonly("n", &EigenValuePair::n)
        .def_readonly("lambda_b", &EigenValuePair::lambda_b)
        .def_readonly("lambda_a", &EigenValuePair::lambda_a)
        .def_readonly("lambda_bar", &EigenValuePair::lambda_bar)
        .def("__repr__", [](const EigenValuePair& p) {
            return "EigenValuePair(n=" + std::to_string(p.n) + ", lambda_b=" + std::to_string(p.lambda_b) + ")";
        });

    m.def("find_eigenvalues", [](const SlabSystem& sys, std::size_t N) { return find_eigenvalues(sys, N); },
          py::arg("system"), py::arg("N"), "First N+1 eigenvalue pairs, sorted.");
    m.def("threshold", [](double eps, double beta, double gamma, double tf) {
        const RegParams reg{eps, beta, gamma};
        reg.validate();
        return reg.threshold(tf);
    }, py::arg("epsilon"), py::arg("beta"), py::arg("gamma"), py::arg("tf"));

    py::class_<RunConfig>(m, "RunConfig")
        .def_static("defaults_1d", &RunConfig::defaults_1d)
        .def_static("defaults_2d", &RunConfig::defaults_2d)
        .def_static("from_json", [](const std::string& text, const RunConfig& base) { return parse_config(text, base); },
                    py::arg("text"), py::arg("base"))
        .def("to_json", &config_to_json)
        .def("validate", &RunConfig::validate)
        .def_readwrite("system", &RunConfig::system)
        .def_readwrite("epsilons", &RunConfig::epsilons)
        .def_readwrite("beta", &RunConfig::beta)
        .def_readwrite("gamma", &RunConfig::gamma)
        .def_readwrite("grid_points", &RunConfig::grid_points)
        .def_readwrite("seed", &RunConfig::seed);

    m.def("run_example", [](const std::string& which, const RunConfig* cfg) { return summary(run_named(which, cfg)); },
          py::arg("which"), py::arg("config") = nullptr,
          "Runs example '1', '2', '3' or '2d' and returns its summary.");
    m.def("write_example", [](const std::string& which, const std::string& dir, const RunConfig* cfg) {
        write_example(run_named(which, cfg), dir);
    }, py::arg("which"), py::arg("dir"), py::arg("config") = nullptr);
    m.def("bound_suite", [](std::uint64_t seed, std::size_t trials) {
        const auto checks = run_bound_suite(seed, trials);
        std::size_t failed = 0;
        for (const auto& b : checks) failed += b.holds ? 0 : 1;
        return py::make_tuple(checks.size(), failed);
    }, py::arg("seed"), py::arg("trials"), "(checks, violations) of the randomized bound suite.");
    m.attr("RNG_NAME") = Rng::kName;
}
