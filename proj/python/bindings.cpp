#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chemodg/celldensity.hpp"
#include "chemodg/config.hpp"
#include "chemodg/fespace.hpp"
#include "chemodg/mesh_io.hpp"
#include "chemodg/output.hpp"
#include "chemodg/presets.hpp"
#include "chemodg/signals.hpp"
#include "chemodg/simulation.hpp"
#include "chemodg/structured.hpp"

namespace py = pybind11;
using namespace chemodg;

namespace {

std::shared_ptr<const Mesh> mesh_from_arrays(int dim, py::array_t<double> vertices,
                                             py::array_t<long long> connectivity) {
    auto v = vertices.unchecked<2>();
    auto c = connectivity.unchecked<2>();
    if (v.shape(1) < dim) throw Error("vertices must have at least dim columns");
    if (c.shape(1) != dim + 1) throw Error("connectivity must have dim+1 columns");
    std::vector<Vec3> verts(v.shape(0));
    for (py::ssize_t i = 0; i < v.shape(0); ++i)
        verts[i] = {v(i, 0), v(i, 1), dim == 3 ? v(i, 2) : 0.0};
    std::vector<std::array<int, 4>> elems(c.shape(0), {-1, -1, -1, -1});
    for (py::ssize_t k = 0; k < c.shape(0); ++k)
        for (int j = 0; j <= dim; ++j) elems[k][j] = static_cast<int>(c(k, j));
    return build_mesh(dim, verts, elems);
}

py::array_t<double> vertices_array(const Mesh& mesh) {
    py::array_t<double> out({mesh.num_vertices(), 3});
    auto a = out.mutable_unchecked<2>();
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        a(i, 0) = mesh.vertices[i].x;
        a(i, 1) = mesh.vertices[i].y;
        a(i, 2) = mesh.vertices[i].z;
    }
    return out;
}

py::array_t<long long> elements_array(const Mesh& mesh) {
    const int nve = mesh.vertices_per_element();
    py::array_t<long long> out({mesh.num_elements(), nve});
    auto a = out.mutable_unchecked<2>();
    for (int k = 0; k < mesh.num_elements(); ++k)
        for (int j = 0; j < nve; ++j) a(k, j) = mesh.elements[k][j];
    return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> from_array(py::array_t<double> a) {
    auto r = a.unchecked<1>();
    std::vector<double> v(r.shape(0));
    for (py::ssize_t i = 0; i < r.shape(0); ++i) v[i] = r(i);
    return v;
}

py::dict diagnostics_dict(const std::vector<DiagnosticsRow>& rows) {
    const py::ssize_t n = static_cast<py::ssize_t>(rows.size());
    py::array_t<double> t(n), mass(n), min_u(n), max_u(n), bound(n), iv(n), iw(n);
    py::array_t<bool> fallback(n);
    py::array_t<int> fp(n);
    for (py::ssize_t i = 0; i < n; ++i) {
        const DiagnosticsRow& r = rows[i];
        t.mutable_at(i) = r.t;
        mass.mutable_at(i) = r.mass;
        min_u.mutable_at(i) = r.min_u;
        max_u.mutable_at(i) = r.max_u;
        bound.mutable_at(i) = r.mass_bound_rhs;
        iv.mutable_at(i) = r.int_v;
        iw.mutable_at(i) = r.int_w;
        fallback.mutable_at(i) = r.fallback_used;
        fp.mutable_at(i) = r.fp_iterations;
    }
    py::dict d;
    d["t"] = t;
    d["mass"] = mass;
    d["min_u"] = min_u;
    d["max_u"] = max_u;
    d["mass_bound_rhs"] = bound;
    d["int_v"] = iv;
    d["int_w"] = iw;
    d["fallback_used"] = fallback;
    d["fp_iterations"] = fp;
    return d;
}

std::vector<DiagnosticsRow> diagnostics_from_dict(py::dict d) {
    auto t = d["t"].cast<py::array_t<double>>();
    auto mass = d["mass"].cast<py::array_t<double>>();
    auto max_u = d["max_u"].cast<py::array_t<double>>();
    std::vector<DiagnosticsRow> rows(t.size());
    for (py::ssize_t i = 0; i < t.size(); ++i) {
        rows[i].t = t.at(i);
        rows[i].mass = mass.at(i);
        rows[i].max_u = max_u.at(i);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Positivity-preserving upwind DG solver for chemotaxis models";

    py::register_exception<Error>(m, "ChemodgError");

    py::class_<Mesh, std::shared_ptr<Mesh>>(m, "Mesh")
        .def_property_readonly("dim", [](const Mesh& s) { return s.dim; })
        .def_property_readonly("num_vertices", &Mesh::num_vertices)
        .def_property_readonly("num_elements", &Mesh::num_elements)
        .def_property_readonly("vertices", &vertices_array)
        .def_property_readonly("elements", &elements_array)
        .def_property_readonly("element_measures",
                               [](const Mesh& s) { return to_array(s.element_measures); })
        .def_property_readonly("domain_measure", [](const Mesh& s) { return s.domain_measure; })
        .def_property_readonly("num_interior_facets",
                               [](const Mesh& s) { return s.interior_facets.size(); })
        .def_property_readonly("num_boundary_facets",
                               [](const Mesh& s) { return s.boundary_facets.size(); });

    py::class_<MeshQualityReport>(m, "MeshQualityReport")
        .def_readonly("max_angle", &MeshQualityReport::max_angle)
        .def_readonly("is_non_obtuse", &MeshQualityReport::is_non_obtuse)
        .def_readonly("h", &MeshQualityReport::h)
        .def_readonly("shape_regularity_ratio", &MeshQualityReport::shape_regularity_ratio);

    m.def("build_mesh", &mesh_from_arrays, py::arg("dim"), py::arg("vertices"),
          py::arg("connectivity"));
    m.def("load_mesh", [](const std::string& path, const std::string& format) {
        return std::const_pointer_cast<Mesh>(load_mesh(path, mesh_format_from_string(format)));
    });
    m.def("save_mesh_native",
          [](std::shared_ptr<const Mesh> mesh, const std::string& path) {
              save_mesh_native(*mesh, path);
          });
    m.def("generate_disk_mesh", [](double radius, double target_h) {
        return std::const_pointer_cast<Mesh>(generate_disk_mesh(radius, target_h));
    });
    m.def("generate_ball_mesh", [](double radius, double target_h) {
        return std::const_pointer_cast<Mesh>(generate_ball_mesh(radius, target_h));
    });
    m.def("rectangle_mesh",
          [](int nx, int ny) { return std::const_pointer_cast<Mesh>(rectangle_mesh(nx, ny)); });
    m.def("crisscross_mesh",
          [](int nx, int ny) { return std::const_pointer_cast<Mesh>(crisscross_mesh(nx, ny)); });
    m.def("quality_report",
          [](std::shared_ptr<const Mesh> mesh) { return quality_report(*mesh); });

    py::enum_<ModelKind>(m, "ModelKind")
        .value("LOCAL", ModelKind::Local)
        .value("NONLOCAL", ModelKind::Nonlocal);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("model", &ModelParams::model)
        .def_readwrite("tau", &ModelParams::tau)
        .def_readwrite("chi", &ModelParams::chi)
        .def_readwrite("xi", &ModelParams::xi)
        .def_readwrite("lam", &ModelParams::lambda)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("c", &ModelParams::c)
        .def_readwrite("n1", &ModelParams::n1)
        .def_readwrite("n2", &ModelParams::n2)
        .def_readwrite("n3", &ModelParams::n3)
        .def_readwrite("rho", &ModelParams::rho)
        .def_readwrite("k", &ModelParams::k)
        .def_readwrite("gamma", &ModelParams::gamma)
        .def_readwrite("a", &ModelParams::a)
        .def_readwrite("d_decay", &ModelParams::d_decay)
        .def_readwrite("alpha", &ModelParams::alpha)
        .def_readwrite("beta", &ModelParams::beta)
        .def_readwrite("eta", &ModelParams::eta)
        .def_readwrite("epsilon", &ModelParams::epsilon)
        .def_readwrite("T", &ModelParams::T)
        .def_readwrite("dt", &ModelParams::dt);

    py::class_<DGField>(m, "DGField")
        .def(py::init([](std::shared_ptr<Mesh> mesh, py::array_t<double> values) {
                 return DGField(mesh, from_array(values));
             }),
             py::arg("mesh"), py::arg("values"))
        .def_property_readonly("values", [](const DGField& f) { return to_array(f.values); })
        .def_property_readonly("mesh",
                               [](const DGField& f) { return std::const_pointer_cast<Mesh>(f.mesh); });

    py::class_<CGField>(m, "CGField")
        .def(py::init([](std::shared_ptr<Mesh> mesh, py::array_t<double> values) {
                 return CGField(mesh, from_array(values));
             }),
             py::arg("mesh"), py::arg("values"))
        .def_property_readonly("values", [](const CGField& f) { return to_array(f.values); })
        .def_property_readonly("mesh",
                               [](const CGField& f) { return std::const_pointer_cast<Mesh>(f.mesh); });

    m.def("dg_from_function",
          [](std::shared_ptr<Mesh> mesh, const std::function<double(double, double, double)>& f) {
              return dg_from_function(mesh, [f](const Vec3& p) { return f(p.x, p.y, p.z); });
          });
    m.def("cg_from_function",
          [](std::shared_ptr<Mesh> mesh, const std::function<double(double, double, double)>& f) {
              return cg_from_function(mesh, [f](const Vec3& p) { return f(p.x, p.y, p.z); });
          });

    m.def("project_pi1", [](const DGField& g) { return project_pi1(g); });
    m.def("project_pih1", [](const DGField& g) { return project_pih1(g); });
    m.def("reg_log", &reg_log, py::arg("u"), py::arg("eps"));
    m.def("element_gradients", [](const CGField& f) {
        ElementGradientField g = element_gradients(f);
        py::array_t<double> out({static_cast<py::ssize_t>(g.vectors.size()), py::ssize_t(3)});
        auto a = out.mutable_unchecked<2>();
        for (size_t k = 0; k < g.vectors.size(); ++k) {
            a(k, 0) = g.vectors[k].x;
            a(k, 1) = g.vectors[k].y;
            a(k, 2) = g.vectors[k].z;
        }
        return out;
    });
    m.def("dg_integral", &dg_integral);
    m.def("cg_lumped_integral", &cg_lumped_integral);

    py::class_<ConditionReport>(m, "ConditionReport")
        .def_readonly("name", &ConditionReport::name)
        .def_readonly("satisfied", &ConditionReport::satisfied)
        .def_readonly("margin", &ConditionReport::margin)
        .def_readonly("detail", &ConditionReport::detail)
        .def_readonly("exact", &ConditionReport::exact)
        .def_readonly("threshold_num", &ConditionReport::threshold_num)
        .def_readonly("threshold_den", &ConditionReport::threshold_den)
        .def_readonly("threshold", &ConditionReport::threshold);

    m.def("validate_params",
          [](const ModelParams& p, int dim) { return validate_params(p, dim); });

    py::class_<Preset>(m, "Preset")
        .def_readonly("name", &Preset::name)
        .def_readonly("description", &Preset::description)
        .def_readonly("params", &Preset::params)
        .def_property_readonly("target_h", [](const Preset& p) { return p.mesh.target_h; });

    m.def("preset", &preset);
    m.def("preset_names", &preset_names);
    m.def("build_preset_mesh",
          [](const Preset& p) { return std::const_pointer_cast<Mesh>(build_preset_mesh(p.mesh)); });
    m.def("build_initial_data", [](std::shared_ptr<Mesh> mesh, const Preset& p) {
        InitialData d = build_initial_data(mesh, p);
        return py::make_tuple(d.u0, d.v0, d.w0);
    });

    py::enum_<BlowUpClass>(m, "BlowUpClass")
        .value("BOUNDED", BlowUpClass::Bounded)
        .value("BLOW_UP", BlowUpClass::BlowUp)
        .value("UNDECIDED", BlowUpClass::Undecided);

    py::class_<BlowUpVerdict>(m, "BlowUpVerdict")
        .def_readonly("classification", &BlowUpVerdict::classification)
        .def_readonly("t_detect", &BlowUpVerdict::t_detect)
        .def_readonly("peak", &BlowUpVerdict::peak);

    m.def(
        "run",
        [](const ModelParams& params, std::shared_ptr<Mesh> mesh, const DGField& u0,
           const CGField& v0, const CGField& w0, const std::string& policy) {
            P1Operators ops = build_p1_operators(mesh);
            RunOptions options;
            options.policy = fallback_policy_from_string(policy);
            RunResult result = run(params, ops, u0, v0, w0, {}, options);
            py::dict out;
            out["diagnostics"] = diagnostics_dict(result.diagnostics);
            out["fallback_count"] = result.fallback_count;
            out["u"] = to_array(result.state.u.values);
            out["v"] = to_array(result.state.v.values);
            out["w"] = to_array(result.state.w.values);
            return out;
        },
        py::arg("params"), py::arg("mesh"), py::arg("u0"), py::arg("v0"), py::arg("w0"),
        py::arg("policy") = "auto");

    m.def(
        "classify_blowup",
        [](py::dict diagnostics, double growth_factor, int plateau_window, double plateau_rtol) {
            BlowUpCriteria crit{growth_factor, plateau_window, plateau_rtol};
            return classify_blowup(diagnostics_from_dict(diagnostics), crit);
        },
        py::arg("diagnostics"), py::arg("growth_factor") = 5.0, py::arg("plateau_window") = 200,
        py::arg("plateau_rtol") = 0.02);

    m.def("write_vtu", [](const DGField& u, const CGField& v, const CGField& w,
                          const std::string& path) {
        SimState state{0, 0.0, u, v, w};
        write_vtu(state, path);
    });

    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("preset_name", &RunConfig::preset_name)
        .def_readonly("params", &RunConfig::params)
        .def_readonly("output_directory", &RunConfig::output_directory)
        .def_readonly("cadence", &RunConfig::cadence)
        .def_readonly("write_vtu", &RunConfig::write_vtu);

    m.def("parse_config_file", &parse_config_file);
    m.def("serialize_config", &serialize_config);
}
