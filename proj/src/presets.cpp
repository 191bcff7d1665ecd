#include "chemodg/presets.hpp"

#include "chemodg/fespace.hpp"
#include "chemodg/mesh_io.hpp"
#include "chemodg/structured.hpp"

namespace chemodg {

namespace {

// Common experimental baseline: every model constant 1 except k = 1.1.
ModelParams baseline_params() {
    ModelParams p;
    p.chi = 1.0;
    p.xi = 1.0;
    p.lambda = 1.0;
    p.mu = 1.0;
    p.c = 0.0;
    p.n1 = p.n2 = p.n3 = 1.0;
    p.rho = 1.0;
    p.k = 1.1;
    p.gamma = 1.0;
    p.a = 1.0;
    p.d_decay = 1.0;
    p.alpha = 1.0;
    p.beta = 1.0;
    p.eta = 0.0;
    p.epsilon = 1e-10;
    p.dt = 1e-5;
    p.T = 3e-3;
    return p;
}

Preset make_test1(bool three_d) {
    Preset pr;
    pr.name = three_d ? "test1-attraction-3d" : "test1-attraction-2d";
    pr.description = "fully parabolic local model, attraction only (chi=5, xi=0)";
    pr.params = baseline_params();
    pr.params.model = ModelKind::Local;
    pr.params.tau = 1;
    pr.params.chi = 5.0;
    pr.params.xi = 0.0;
    pr.mesh.kind = three_d ? MeshSpec::Kind::Ball : MeshSpec::Kind::Disk;
    pr.mesh.radius = 1.0;
    pr.mesh.target_h = 4.4e-2;
    pr.u0 = {500.0, 35.0};
    pr.v0 = {10.0, 35.0};
    pr.w0 = {0.0, 35.0};  // repulsion disabled; the w equation still runs
    return pr;
}

Preset make_test2(bool three_d) {
    Preset pr = make_test1(three_d);
    pr.name = three_d ? "test2-attraction-repulsion-3d" : "test2-attraction-repulsion-2d";
    pr.description = "fully parabolic local model with repulsion (chi=5, xi=1)";
    pr.params.xi = 1.0;
    pr.w0 = {10.0, 35.0};
    return pr;
}

Preset make_test3(bool coarse) {
    Preset pr;
    pr.name = coarse ? "test3-nonlocal-2d-coarse" : "test3-nonlocal-2d";
    pr.description = coarse
                         ? "nonlocal model on a coarse unit disk (CI scale)"
                         : "nonlocal attraction-repulsion model on the unit disk (alpha=1.5)";
    pr.params = baseline_params();
    pr.params.model = ModelKind::Nonlocal;
    pr.params.tau = 0;
    pr.params.alpha = 1.5;
    pr.mesh.kind = MeshSpec::Kind::Disk;
    pr.mesh.radius = 1.0;
    pr.mesh.target_h = coarse ? 5e-2 : 1.4e-2;
    pr.u0 = {100.0, 35.0};
    pr.v0 = {10.0, 35.0};
    pr.w0 = {10.0, 35.0};
    return pr;
}

}  // namespace

Preset preset(const std::string& name) {
    if (name == "test1-attraction-3d") return make_test1(true);
    if (name == "test1-attraction-2d") return make_test1(false);
    if (name == "test2-attraction-repulsion-3d") return make_test2(true);
    if (name == "test2-attraction-repulsion-2d") return make_test2(false);
    if (name == "test3-nonlocal-2d") return make_test3(false);
    if (name == "test3-nonlocal-2d-coarse") return make_test3(true);
    throw Error("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
    return {
        "test1-attraction-3d",  "test1-attraction-2d",
        "test2-attraction-repulsion-3d", "test2-attraction-repulsion-2d",
        "test3-nonlocal-2d",    "test3-nonlocal-2d-coarse",
    };
}

std::shared_ptr<const Mesh> build_preset_mesh(const MeshSpec& spec) {
    switch (spec.kind) {
        case MeshSpec::Kind::Disk: return generate_disk_mesh(spec.radius, spec.target_h);
        case MeshSpec::Kind::Ball: return generate_ball_mesh(spec.radius, spec.target_h);
        case MeshSpec::Kind::File: return load_mesh(spec.path, mesh_format_from_string(spec.format));
    }
    throw Error("build_preset_mesh: bad mesh spec");
}

InitialData build_initial_data(std::shared_ptr<const Mesh> mesh, const Preset& preset) {
    InitialData data;
    data.u0 = dg_from_function(mesh, preset.u0);
    data.v0 = cg_from_function(mesh, preset.v0);
    data.w0 = cg_from_function(mesh, preset.w0);
    return data;
}

}  // namespace chemodg
