// Python face of the library: the scalar oracle, cavity-state expansions,
// single-shot statistics, and the scenario runner driven by a JSON config.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbatt/report_io.hpp"
#include "qbatt/two_qubit_oracle.hpp"

namespace py = pybind11;

namespace {

std::vector<double> populations(const std::string& state, int dim) {
    const qbatt::CavityStateSpec spec = qbatt::parse_cavity_state(state);
    const int d = dim > 0 ? dim : qbatt::recommended_cavity_dim(spec, 1);
    const qbatt::RVec w = qbatt::diagonal_populations(spec, d);
    return {w.data(), w.data() + w.size()};
}

std::vector<std::complex<double>> amplitudes(const std::string& state, int dim) {
    const qbatt::CavityStateSpec spec = qbatt::parse_cavity_state(state);
    const int d = dim > 0 ? dim : qbatt::recommended_cavity_dim(spec, 1);
    const qbatt::Vec a = qbatt::pure_amplitudes(spec, d);
    return {a.data(), a.data() + a.size()};
}

py::dict stats_to_dict(const qbatt::EnergyStats& s) {
    py::dict d;
    d["g_tau"] = s.g_tau;
    d["mean"] = s.mean;
    d["variance"] = s.variance;
    d["snr"] = s.snr;
    return d;
}

std::string run_json(const std::string& config_text) {
    const qbatt::RunConfig config = qbatt::parse_config(config_text);
    return qbatt::to_json(qbatt::run_scenario(config));
}

}  // namespace

PYBIND11_MODULE(qbatt_py, m) {
    m.doc() = "Charging statistics of qubit batteries fed by a single cavity mode";
    m.attr("__version__") = qbatt::kArtifactVersion;

    m.def(
        "eval_fh",
        [](int n, double g_tau) {
            const auto fh = qbatt::oracle::eval_fh(n, g_tau);
            return py::make_tuple(fh.f, fh.h);
        },
        py::arg("n"), py::arg("g_tau"),
        "Two-quantum and one-quantum transfer weights (f, h) for the "
        "two-qubit collective problem started from the number state n.");
    m.def("oracle_snr", &qbatt::oracle::oracle_snr, py::arg("n"), py::arg("g_tau"),
          "Closed-form single-qubit signal-to-noise ratio; divergences map to +inf.");
    m.def("oracle_gf", &qbatt::oracle::oracle_gf, py::arg("n"), py::arg("g_tau"),
          py::arg("chi"), "Closed-form single-qubit moment generating function.");

    m.def("cavity_populations", &populations, py::arg("state"), py::arg("dim") = 0,
          "Number-basis populations of a cavity state given in config syntax, "
          "e.g. \"thermal-fock(5,0.1)\". dim=0 picks the recommended size.");
    m.def("cavity_amplitudes", &amplitudes, py::arg("state"), py::arg("dim") = 0,
          "Number-basis amplitudes of a pure cavity state in config syntax.");

    m.def(
        "single_qubit_stats",
        [](int n, double g_tau) { return stats_to_dict(qbatt::tc2_single_qubit_stats(n, g_tau)); },
        py::arg("n"), py::arg("g_tau"),
        "Per-qubit energy statistics of the two-qubit collective run.");
    m.def(
        "two_qubit_stats",
        [](int n, double g_tau) { return stats_to_dict(qbatt::tc2_two_qubit_stats(n, g_tau)); },
        py::arg("n"), py::arg("g_tau"),
        "Collective energy statistics of the two-qubit run.");

    m.def("run_scenario", &run_json, py::arg("config_json"),
          "Run a scenario described by a JSON config string and return the "
          "table plus manifest as a JSON string.");

    py::register_exception<qbatt::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<qbatt::TruncationError>(m, "TruncationError", PyExc_RuntimeError);
}
