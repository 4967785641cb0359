#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gb/commands.hpp"

namespace py = pybind11;

namespace {

gb::json to_gb_json(const py::object& obj) {
    if (py::isinstance<py::str>(obj)) {
        try {
            return gb::json::parse(obj.cast<std::string>());
        } catch (const std::exception& e) {
            throw gb::InvalidInput(std::string("malformed JSON: ") + e.what());
        }
    }
    // dict / list inputs go through python's own serializer.
    py::object dumps = py::module_::import("json").attr("dumps");
    return gb::json::parse(dumps(obj).cast<std::string>());
}

py::object to_py(const gb::json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

py::object report_to_py(const gb::Report& rep) {
    py::dict out = to_py(rep.to_json());
    out["exit_code"] = rep.exit_code;
    return out;
}

py::object py_cohomology(const py::object& instance, int degree) {
    return report_to_py(
        gb::run_guarded("cohomology", [&] { return gb::cmd_cohomology(to_gb_json(instance), degree); }));
}

py::object py_bundle_iso(const py::object& a, const py::object& b) {
    return report_to_py(
        gb::run_guarded("iso", [&] { return gb::cmd_bundle_iso(to_gb_json(a), to_gb_json(b)); }));
}

py::object py_xprod(const py::object& instance, const std::string& mode, int point) {
    return report_to_py(
        gb::run_guarded("xprod", [&] { return gb::cmd_xprod(to_gb_json(instance), point, mode); }));
}

py::object py_verify(const py::object& instance, const std::string& what, double tolerance,
                     const std::string& dual_sign) {
    return report_to_py(gb::run_guarded(
        "verify", [&] { return gb::cmd_verify(to_gb_json(instance), what, tolerance, dual_sign); }));
}

py::tuple py_smith_normal_form(const std::vector<std::vector<int64_t>>& rows) {
    if (rows.empty()) throw gb::InvalidInput("matrix must be nonempty");
    gb::IntMat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) throw gb::InvalidInput("ragged matrix");
        for (size_t c = 0; c < rows[r].size(); ++c) m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
    auto s = gb::smith_normal_form(m);
    auto dump = [](const gb::IntMat& a) {
        std::vector<std::vector<int64_t>> out(a.rows(), std::vector<int64_t>(a.cols()));
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c) out[r][c] = a(r, c);
        return out;
    };
    return py::make_tuple(dump(s.u), dump(s.d), dump(s.v));
}

}  // namespace

PYBIND11_MODULE(groupbundle, m) {
    m.doc() = "finite group-bundle cohomology and crossed-product verification";

    m.def("smith_normal_form", &py_smith_normal_form, py::arg("matrix"),
          "Smith normal form (U, D, V) with U*M*V = D, U and V unimodular.");
    m.def("cohomology", &py_cohomology, py::arg("instance"), py::arg("degree") = 1,
          "Cech cohomology report for a bundle instance (JSON string or dict).");
    m.def("bundle_iso", &py_bundle_iso, py::arg("a"), py::arg("b"),
          "Principal bundle isomorphism test with coboundary witness.");
    m.def("xprod", &py_xprod, py::arg("instance"), py::arg("mode"), py::arg("point") = 0,
          "Crossed product operations: build | spectrum | decompose.");
    m.def("verify", &py_verify, py::arg("instance"), py::arg("what"), py::arg("tolerance") = 1e-9,
          py::arg("dual_sign") = "conj",
          "Theorem-level verification: unitary-iso | equivalence | locunit | takai.");
}
