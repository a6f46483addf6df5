#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "starkres/experiments.hpp"

namespace py = pybind11;
using namespace starkres;

namespace {

PotentialSpec spec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    nlohmann::json wrapper = {{"potential", {{"terms", j}}},
                              {"params", {{"B", 1.0}, {"h_list", {0.1}}}},
                              {"grid", {{"x_min", -1.0}, {"x_max", 1.0}, {"y_min", -1.0},
                                        {"y_max", 1.0}}},
                              {"window", {{"a", 0.0}, {"b", 1.0}}}};
    return parse_config(wrapper).potential;
}

}  // namespace

PYBIND11_MODULE(_starkres, m) {
    m.doc() = "shape-resonance workbench for 2D magnetic Stark Hamiltonians";

    m.def("harmonic_frequencies", [](double B, double l1, double l2) {
        double a1, a2;
        harmonic_frequencies(B, l1, l2, a1, a2);
        return py::make_tuple(a1, a2);
    }, py::arg("B"), py::arg("lambda1"), py::arg("lambda2"));

    m.def("predicted_levels", [](double E, double a1, double a2, double h, double ceiling) {
        auto levels = predicted_levels(E, a1, a2, h, ceiling);
        py::list out;
        for (const auto& l : levels) out.append(py::make_tuple(l.k1, l.k2, l.value));
        return out;
    }, py::arg("energy"), py::arg("alpha1"), py::arg("alpha2"), py::arg("h"), py::arg("ceiling"));

    m.def("weyl_count_prediction", &weyl_count_prediction, py::arg("vol"), py::arg("h"));

    m.def("eval_total_potential",
          [](const std::string& terms_json, std::complex<double> x, double y) {
              return eval_total_potential(spec_from_json(terms_json), Complex(x), y);
          },
          py::arg("terms_json"), py::arg("x"), py::arg("y"));

    m.def("find_well_bottom",
          [](const std::string& terms_json, double sx, double sy) {
              CriticalPoint cp = find_well_bottom(spec_from_json(terms_json), sx, sy);
              py::dict d;
              d["x"] = cp.x;
              d["y"] = cp.y;
              d["energy"] = cp.energy;
              d["lambda1"] = cp.lambda1;
              d["lambda2"] = cp.lambda2;
              d["converged"] = cp.converged;
              d["nondegenerate"] = cp.nondegenerate;
              return d;
          },
          py::arg("terms_json"), py::arg("seed_x"), py::arg("seed_y"));

    m.def("trapped_volume_closed_form",
          [](const std::string& terms_json, double a, double b, double x0, double x1, double y0,
             double y1, int resolution) {
              VolumeEstimate v = trapped_volume_closed_form(spec_from_json(terms_json), a, b,
                                                            Rectangle{x0, x1, y0, y1}, resolution);
              return py::make_tuple(v.value, v.std_error);
          },
          py::arg("terms_json"), py::arg("a"), py::arg("b"), py::arg("x_min"), py::arg("x_max"),
          py::arg("y_min"), py::arg("y_max"), py::arg("resolution") = 400);

    m.def("reference_eigenvalues",
          [](const std::string& config_json, double h, double shift, int k) {
              ScenarioConfig config = parse_config(nlohmann::json::parse(config_json));
              OperatorBundle op = assemble_scenario_operator(config, h, "reference");
              auto pairs = eigenpairs_near(op.matrix, Complex(shift, 0.0), k,
                                           config.knobs.arnoldi_tol, config.knobs.dense_cap);
              py::list out;
              for (const auto& p : pairs) out.append(std::complex<double>(p.value));
              return out;
          },
          py::arg("config_json"), py::arg("h"), py::arg("shift"), py::arg("k"));

    m.def("resonances",
          [](const std::string& config_json, double h, double shift, int k) {
              ScenarioConfig config = parse_config(nlohmann::json::parse(config_json));
              OperatorBundle op = assemble_scenario_operator(config, h, "distorted");
              auto pairs = eigenpairs_near(op.matrix, Complex(shift, 0.0), k,
                                           config.knobs.arnoldi_tol, config.knobs.dense_cap);
              py::list out;
              for (const auto& p : pairs) out.append(std::complex<double>(p.value));
              return out;
          },
          py::arg("config_json"), py::arg("h"), py::arg("shift"), py::arg("k"));

    m.def("run_experiment",
          [](const std::string& name, const std::string& config_path, const std::string& out_dir,
             const std::string& emit, int threads) {
              ScenarioConfig config = load_config(config_path);
              ExperimentReport rep = run_experiment(name, config, threads);
              emit_report(rep, out_dir, parse_emit(emit));
              return rep.to_json().dump(2);
          },
          py::arg("name"), py::arg("config_path"), py::arg("out_dir"), py::arg("emit") = "json",
          py::arg("threads") = 1);
}
