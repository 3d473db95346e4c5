#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rigidemt/density.hpp"
#include "rigidemt/effective.hpp"
#include "rigidemt/emt.hpp"
#include "rigidemt/errors.hpp"
#include "rigidemt/io.hpp"
#include "rigidemt/oracle.hpp"
#include "rigidemt/presets.hpp"
#include "rigidemt/verify.hpp"

namespace py = pybind11;
using namespace rigidemt;

namespace {

Loading loading_from_name(const std::string& name) {
    if (name == "U1") return Loading::u1();
    if (name == "U2") return Loading::u2();
    if (name == "U3") return Loading::u3();
    throw ValidationError("loading must be U1, U2 or U3");
}

} // namespace

PYBIND11_MODULE(rigidemt, m) {
    m.doc() = "elastic moment tensors of rigid planar inclusions from exterior conformal maps";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

    py::class_<ExteriorMap>(m, "ExteriorMap")
        .def(py::init([](double gamma, const std::vector<Complex>& a) {
                 return ExteriorMap{gamma, a};
             }),
             py::arg("gamma"), py::arg("a") = std::vector<Complex>{})
        .def_readwrite("gamma", &ExteriorMap::gamma)
        .def_readwrite("a", &ExteriorMap::a)
        .def("degree", &ExteriorMap::degree)
        .def("area", &ExteriorMap::area)
        .def("boundary_point", &ExteriorMap::boundary_point)
        .def("scale_factor", &ExteriorMap::scale_factor)
        .def("map", &ExteriorMap::map)
        .def("__repr__", [](const ExteriorMap& s) {
            return "ExteriorMap(gamma=" + std::to_string(s.gamma) + ", degree=" +
                   std::to_string(s.degree()) + ")";
        });

    m.def("validate_map", [](const ExteriorMap& map) {
        const MapReport r = validate(map);
        py::dict d;
        d["accepted"] = r.accepted;
        d["sufficient_condition"] = r.sufficient_condition;
        d["condition_sum"] = r.condition_sum;
        d["boundary_simple"] = r.boundary_simple;
        d["message"] = r.message;
        return d;
    });

    py::class_<LameMaterial>(m, "LameMaterial")
        .def_readonly("lambda_", &LameMaterial::lambda)
        .def_readonly("mu", &LameMaterial::mu)
        .def_readonly("alpha", &LameMaterial::alpha)
        .def_readonly("beta", &LameMaterial::beta)
        .def_readonly("kappa", &LameMaterial::kappa);

    m.def(
        "make_material",
        [](double lambda, double mu, bool plane_stress) {
            return make_material(lambda, mu,
                                 plane_stress ? KappaConvention::PlaneStress
                                              : KappaConvention::PlaneStrain);
        },
        py::arg("lambda_"), py::arg("mu"), py::arg("plane_stress") = false);

    py::class_<EmtTensor>(m, "EmtTensor")
        .def_readonly("m1111", &EmtTensor::m1111)
        .def_readonly("m2222", &EmtTensor::m2222)
        .def_readonly("m1122", &EmtTensor::m1122)
        .def_readonly("m1112", &EmtTensor::m1112)
        .def_readonly("m2212", &EmtTensor::m2212)
        .def_readonly("m1212", &EmtTensor::m1212)
        .def("entry", &EmtTensor::entry)
        .def("mandel", &EmtTensor::mandel)
        .def("voigt", &EmtTensor::voigt);

    py::class_<DensityCoefficients>(m, "DensityCoefficients")
        .def_readonly("b1", &DensityCoefficients::b1)
        .def_readonly("b2", &DensityCoefficients::b2)
        .def_readonly("b3", &DensityCoefficients::b3)
        .def_readonly("residual", &DensityCoefficients::residual)
        .def("coefficients",
             [](const DensityCoefficients& dc) {
                 py::dict d;
                 for (const auto& [k, v] : dc.c) d[py::int_(k)] = v;
                 return d;
             })
        .def("coeff", &DensityCoefficients::coeff);

    py::class_<EmtResult>(m, "EmtResult")
        .def_readonly("tensor", &EmtResult::tensor)
        .def("e_pairs",
             [](const EmtResult& r) {
                 py::list l;
                 for (const auto& e : r.e) l.append(py::make_tuple(e.e1, e.e2));
                 return l;
             })
        .def("density", [](const EmtResult& r, int i) { return r.densities.at(static_cast<size_t>(i)); })
        .def("diagnostics", [](const EmtResult& r) {
            py::dict d;
            d["identity_residual"] = r.diag.identity_residual;
            d["symmetry_residual"] = r.diag.symmetry_residual;
            d["alt_m1122_gap"] = r.diag.alt_m1122_gap;
            d["epair_quadrature_mismatch"] = r.diag.epair_quadrature_mismatch;
            d["max_boundary_residual"] = r.diag.max_boundary_residual;
            d["extra_support"] = r.diag.extra_support;
            d["window"] = r.diag.window;
            d["refinement_delta"] = r.diag.refinement_delta;
            return d;
        });

    m.def(
        "emt_first_order",
        [](const ExteriorMap& map, const LameMaterial& mat, int truncation) {
            SolveOptions opts;
            opts.truncation = truncation;
            return emt_first_order(map, mat, opts);
        },
        py::arg("map"), py::arg("material"), py::arg("truncation") = 64);

    m.def("closed_form_emt", &closed_form_emt, py::arg("map"), py::arg("material"));

    m.def(
        "solve_density",
        [](const ExteriorMap& map, const LameMaterial& mat, const std::string& loading,
           int truncation) {
            SolveOptions opts;
            opts.truncation = truncation;
            return solve_first_order(map, mat, loading_from_name(loading), opts);
        },
        py::arg("map"), py::arg("material"), py::arg("loading") = "U1",
        py::arg("truncation") = 64);

    m.def(
        "total_field",
        [](const DensityCoefficients& dc, const ExteriorMap& map, const LameMaterial& mat,
           const std::string& loading, Complex w) {
            return total_field(dc, map, mat, loading_from_name(loading), w);
        },
        py::arg("density"), py::arg("map"), py::arg("material"), py::arg("loading"),
        py::arg("w"));

    m.def(
        "single_layer",
        [](const DensityCoefficients& dc, const ExteriorMap& map, const LameMaterial& mat,
           Complex w) { return single_layer_exterior(dc, map, mat, w); },
        py::arg("density"), py::arg("map"), py::arg("material"), py::arg("w"));

    m.def("background_stiffness", &background_stiffness);

    m.def(
        "effective",
        [](const LameMaterial& mat, const EmtTensor& emt, double f,
           std::optional<Eigen::Matrix3d> s) { return effective(mat, emt, f, s).c_star; },
        py::arg("material"), py::arg("emt"), py::arg("f"),
        py::arg("s") = std::nullopt);

    m.def("volume_fraction", &volume_fraction, py::arg("map"), py::arg("cell_area") = 1.0);
    m.def("isotropy_deviation", &isotropy_deviation);

    m.def(
        "oracle_emt",
        [](const ExteriorMap& map, const LameMaterial& mat, int n_modes) {
            const auto r = oracle::emt_by_quadrature(map, mat, n_modes);
            return py::make_tuple(r.tensor, r.max_boundary_residual);
        },
        py::arg("map"), py::arg("material"), py::arg("n_modes") = 32);

    m.def("presets", []() {
        py::dict d;
        for (const auto& p : presets()) d[p.name.c_str()] = p.map;
        return d;
    });

    m.def("shape_to_json", &shape_to_json);
    m.def("parse_shape_json",
          [](const std::string& text) { return parse_shape_json(text, "<string>"); });
}
